import { execFileSync } from "node:child_process";
import {
  appendFileSync,
  existsSync,
  mkdtempSync,
  readFileSync,
  writeFileSync,
} from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { beforeAll, describe, expect, it } from "vitest";

import { loadManifest, sha256Hex } from "../src/manifest.js";
import { readTextChunks } from "../src/png.js";
import { niceTicks } from "../src/svg.js";
import { main, parseArgs, renderFigure } from "../src/render.js";

const RENDER_IDS = ["3", "5", "6", "7", "9-calc"];

let dataDir: string;
let outDir: string;

function datasetFile(figureId: string): string {
  return join(dataDir, `figure${figureId.replace("-", "_")}.csv`);
}

beforeAll(() => {
  dataDir = mkdtempSync(join(tmpdir(), "isgsim-data-"));
  outDir = mkdtempSync(join(tmpdir(), "isgsim-out-"));
  execFileSync(
    "python3",
    ["-m", "isgsim.cli", "figure", "all", "--out-dir", dataDir, "--quiet"],
    { stdio: "inherit" },
  );
});

describe("rendering the bench datasets", () => {
  it.each(RENDER_IDS)("renders figure %s with checksum and markers", async (id) => {
    const dataset = datasetFile(id);
    const out = join(outDir, `figure-${id}.svg`);
    const result = await renderFigure({ figureId: id, datasetPath: dataset, outPath: out });
    expect(existsSync(out)).toBe(true);
    const svg = readFileSync(out, "utf8");
    expect(svg).toContain("<svg");
    // the dataset checksum is embedded in the image metadata
    expect(result.sha256).toBe(sha256Hex(readFileSync(dataset)));
    expect(svg).toContain(`dataset-sha256: ${result.sha256}`);
    // every reference constant in the manifest appears as an annotated marker
    const manifest = loadManifest(join(dataDir, "manifest.json"));
    const entry = manifest.datasets.find((e) => e.figure === id)!;
    for (const point of entry.reference_points) {
      expect(svg).toContain(point.label);
    }
    const markerCount = (svg.match(/reference-marker/g) ?? []).length;
    expect(markerCount).toBe(entry.reference_points.length);
  });

  it("also renders the standard-scheme entrance family (figure 2)", async () => {
    const out = join(outDir, "figure-2.svg");
    await renderFigure({ figureId: "2", datasetPath: datasetFile("2"), outPath: out });
    expect(readFileSync(out, "utf8")).toContain("<svg");
  });

  it("rasterizes to PNG with the checksum in a text chunk", async () => {
    const out = join(outDir, "figure-7.png");
    const result = await renderFigure({
      figureId: "7",
      datasetPath: datasetFile("7"),
      outPath: out,
      format: "png",
    });
    const png = readFileSync(out);
    expect(png.subarray(0, 4)).toEqual(Buffer.from([0x89, 0x50, 0x4e, 0x47]));
    const chunks = readTextChunks(png);
    expect(chunks["dataset-sha256"]).toBe(result.sha256);
  });

  it("never mutates the dataset it reads", async () => {
    const dataset = datasetFile("3");
    const before = readFileSync(dataset);
    await renderFigure({
      figureId: "3",
      datasetPath: dataset,
      outPath: join(outDir, "again.svg"),
    });
    expect(readFileSync(dataset).equals(before)).toBe(true);
  });
});

describe("failure modes", () => {
  it("rejects a dataset missing from disk", async () => {
    await expect(
      renderFigure({ figureId: "7", datasetPath: join(dataDir, "figure7.csv.gone") }),
    ).rejects.toThrow(/manifest has no entry|cannot read/);
  });

  it("rejects a checksum mismatch and writes nothing", async () => {
    const tampered = mkdtempSync(join(tmpdir(), "isgsim-tampered-"));
    const dataset = join(tampered, "figure7.csv");
    writeFileSync(dataset, readFileSync(datasetFile("7")));
    writeFileSync(
      join(tampered, "manifest.json"),
      readFileSync(join(dataDir, "manifest.json")),
    );
    appendFileSync(dataset, "0.1,0,0,0,0,0,0\n");
    const out = join(tampered, "out.svg");
    await expect(
      renderFigure({ figureId: "7", datasetPath: dataset, outPath: out }),
    ).rejects.toThrow(/checksum/);
    expect(existsSync(out)).toBe(false);
  });

  it("rejects a schema mismatch against the manifest", async () => {
    const broken = mkdtempSync(join(tmpdir(), "isgsim-schema-"));
    const dataset = join(broken, "figure7.csv");
    writeFileSync(dataset, readFileSync(datasetFile("7")));
    const manifest = JSON.parse(
      readFileSync(join(dataDir, "manifest.json"), "utf8"),
    );
    const entry = manifest.datasets.find((e: { figure: string }) => e.figure === "7");
    entry.columns = [...entry.columns.slice(0, -1), "renamed"];
    writeFileSync(join(broken, "manifest.json"), JSON.stringify(manifest));
    await expect(
      renderFigure({ figureId: "7", datasetPath: dataset }),
    ).rejects.toThrow(/schema/);
  });

  it("rejects an empty dataset and writes no file", async () => {
    const empty = mkdtempSync(join(tmpdir(), "isgsim-empty-"));
    const dataset = join(empty, "figure7.csv");
    const header = "od,eta_standard_small,eta_standard_large,eta_isg_small,eta_isg_large,eta_uniform_sin,eta_uniform_square\n";
    writeFileSync(dataset, header);
    const manifest = {
      generator: "isgsim",
      datasets: [
        {
          figure: "7",
          file: "figure7.csv",
          sha256: sha256Hex(Buffer.from(header)),
          columns: header.trim().split(","),
          metadata: {},
          reference_points: [],
        },
      ],
    };
    writeFileSync(join(empty, "manifest.json"), JSON.stringify(manifest));
    const out = join(empty, "out.svg");
    await expect(
      renderFigure({ figureId: "7", datasetPath: dataset, outPath: out }),
    ).rejects.toThrow(/no data rows/);
    expect(existsSync(out)).toBe(false);
  });

  it("rejects a figure id that does not own the dataset", async () => {
    await expect(
      renderFigure({ figureId: "3", datasetPath: datasetFile("7") }),
    ).rejects.toThrow(/belongs to figure 7/);
  });

  it("rejects unknown formats", async () => {
    await expect(
      renderFigure({
        figureId: "7",
        datasetPath: datasetFile("7"),
        format: "gif" as never,
      }),
    ).rejects.toThrow(/format/);
  });
});

describe("command line", () => {
  it("parses positionals and options", () => {
    const spec = parseArgs(["7", "d.csv", "-o", "x.svg", "--format", "png"]);
    expect(spec).toMatchObject({
      figureId: "7",
      datasetPath: "d.csv",
      outPath: "x.svg",
      format: "png",
    });
    expect(() => parseArgs(["7"])).toThrow(/usage/);
    expect(() => parseArgs(["7", "d.csv", "--wat"])).toThrow(/unknown option/);
  });

  it("reports errors through the exit code", async () => {
    expect(await main(["7", join(dataDir, "missing.csv")])).toBe(1);
    expect(
      await main(["7", datasetFile("7"), "-o", join(outDir, "cli.svg")]),
    ).toBe(0);
  });
});

describe("plot helpers", () => {
  it("produces human ticks", () => {
    expect(niceTicks(0, 3)).toEqual([0, 1, 2, 3]);
    const small = niceTicks(0, 0.25);
    expect(small.length).toBeGreaterThanOrEqual(4);
    expect(small.every((t) => t >= 0 && t <= 0.25)).toBe(true);
    expect(niceTicks(2, 2)).toEqual([2]);
  });
});
