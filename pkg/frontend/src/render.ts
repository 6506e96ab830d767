/** Render a bench dataset into an annotated figure.
 *
 * Usage: render <figure-id> <dataset.csv> [-o out] [--manifest path]
 *        [--format svg|png]
 *
 * The dataset must be listed in the bench manifest (a sibling
 * manifest.json by default) and match its sha256 checksum; that checksum
 * is embedded in the rendered image metadata.  Reference constants from
 * the manifest are drawn as annotated markers.
 */

import { writeFileSync } from "node:fs";
import { dirname, join } from "node:path";

import { parseCsv } from "./csv.js";
import { layoutFor, seriesFor } from "./figures.js";
import {
  entryFor,
  loadManifest,
  manifestPathFor,
  sha256Hex,
} from "./manifest.js";
import { readVerified } from "./manifest.js";
import { withTextChunks } from "./png.js";
import { buildSvg } from "./svg.js";

export interface PlotSpec {
  figureId: string;
  datasetPath: string;
  manifestPath?: string;
  outPath?: string;
  format?: "svg" | "png";
}

export interface RenderResult {
  outPath: string;
  sha256: string;
}

export async function renderFigure(spec: PlotSpec): Promise<RenderResult> {
  const format = spec.format ?? "svg";
  if (format !== "svg" && format !== "png") {
    throw new Error(`unknown format ${JSON.stringify(format)} (svg or png)`);
  }
  const manifestPath = spec.manifestPath ?? manifestPathFor(spec.datasetPath);
  const manifest = loadManifest(manifestPath);
  const entry = entryFor(manifest, spec.datasetPath);
  if (entry.figure !== spec.figureId) {
    throw new Error(
      `dataset ${entry.file} belongs to figure ${entry.figure}, ` +
        `not ${spec.figureId}`,
    );
  }
  const bytes = readVerified(spec.datasetPath, entry);
  const digest = sha256Hex(bytes);
  const data = parseCsv(bytes.toString("utf8"));
  const sameColumns =
    data.columns.length === entry.columns.length &&
    data.columns.every((c, i) => c === entry.columns[i]);
  if (!sameColumns) {
    throw new Error(
      `dataset columns [${data.columns.join(", ")}] do not match the ` +
        `manifest schema [${entry.columns.join(", ")}]`,
    );
  }
  const series = seriesFor(spec.figureId, data);
  const markers = entry.reference_points ?? [];
  const metadata = {
    "dataset-sha256": digest,
    "dataset-file": entry.file,
    figure: entry.figure,
    generator: "isgsim-figures",
  };
  const svg = buildSvg(series, layoutFor(spec.figureId), markers, metadata);

  const defaultName = `figure${entry.figure.replace("-", "_")}.${format}`;
  const outPath = spec.outPath ?? join(dirname(spec.datasetPath), defaultName);
  if (format === "svg") {
    writeFileSync(outPath, svg);
  } else {
    const { Resvg } = await import("@resvg/resvg-js");
    const png = new Resvg(svg, { background: "white" }).render().asPng();
    writeFileSync(outPath, withTextChunks(Buffer.from(png), metadata));
  }
  return { outPath, sha256: digest };
}

export function parseArgs(argv: string[]): PlotSpec {
  const positional: string[] = [];
  const spec: Partial<PlotSpec> = {};
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "-o" || arg === "--out") {
      spec.outPath = argv[++i];
    } else if (arg === "--manifest") {
      spec.manifestPath = argv[++i];
    } else if (arg === "--format") {
      spec.format = argv[++i] as PlotSpec["format"];
    } else if (arg.startsWith("-")) {
      throw new Error(`unknown option ${arg}`);
    } else {
      positional.push(arg);
    }
  }
  if (positional.length !== 2) {
    throw new Error("usage: render <figure-id> <dataset.csv> [-o out] [--manifest path] [--format svg|png]");
  }
  spec.figureId = positional[0];
  spec.datasetPath = positional[1];
  return spec as PlotSpec;
}

export async function main(argv: string[]): Promise<number> {
  try {
    const spec = parseArgs(argv);
    const result = await renderFigure(spec);
    console.log(`wrote ${result.outPath} (dataset sha256 ${result.sha256.slice(0, 12)}...)`);
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
