/** PNG text-chunk injection so rasterized figures carry their dataset
 * checksum, mirroring the SVG <metadata> element. */

const PNG_SIGNATURE = Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(data: Buffer): number {
  let crc = 0xffffffff;
  for (const byte of data) {
    crc = CRC_TABLE[(crc ^ byte) & 0xff] ^ (crc >>> 8);
  }
  return (crc ^ 0xffffffff) >>> 0;
}

function textChunk(keyword: string, value: string): Buffer {
  const body = Buffer.concat([
    Buffer.from(keyword, "latin1"),
    Buffer.from([0]),
    Buffer.from(value, "latin1"),
  ]);
  const typeAndBody = Buffer.concat([Buffer.from("tEXt", "latin1"), body]);
  const length = Buffer.alloc(4);
  length.writeUInt32BE(body.length);
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(typeAndBody));
  return Buffer.concat([length, typeAndBody, crc]);
}

/** Insert tEXt chunks right after IHDR. */
export function withTextChunks(png: Buffer, entries: Record<string, string>): Buffer {
  if (!png.subarray(0, 8).equals(PNG_SIGNATURE)) {
    throw new Error("not a PNG stream");
  }
  const ihdrLength = png.readUInt32BE(8);
  const afterIhdr = 8 + 4 + 4 + ihdrLength + 4;
  const chunks = Object.entries(entries).map(([k, v]) => textChunk(k, v));
  return Buffer.concat([png.subarray(0, afterIhdr), ...chunks, png.subarray(afterIhdr)]);
}

/** Decode the tEXt entries of a PNG (for tests and tooling). */
export function readTextChunks(png: Buffer): Record<string, string> {
  if (!png.subarray(0, 8).equals(PNG_SIGNATURE)) {
    throw new Error("not a PNG stream");
  }
  const out: Record<string, string> = {};
  let offset = 8;
  while (offset + 8 <= png.length) {
    const length = png.readUInt32BE(offset);
    const type = png.subarray(offset + 4, offset + 8).toString("latin1");
    if (type === "tEXt") {
      const body = png.subarray(offset + 8, offset + 8 + length);
      const zero = body.indexOf(0);
      out[body.subarray(0, zero).toString("latin1")] = body
        .subarray(zero + 1)
        .toString("latin1");
    }
    offset += 12 + length;
    if (type === "IEND") break;
  }
  return out;
}
