/** Bench manifest loading and dataset checksum verification. */

import { createHash } from "node:crypto";
import { readFileSync } from "node:fs";
import { basename, dirname, join } from "node:path";

export interface ReferencePoint {
  x: number;
  y: number;
  label: string;
}

export interface ManifestEntry {
  figure: string;
  file: string;
  sha256: string;
  columns: string[];
  metadata: Record<string, unknown>;
  reference_points: ReferencePoint[];
}

export interface Manifest {
  generator: string;
  datasets: ManifestEntry[];
  experiment_reference?: unknown[];
}

export function loadManifest(path: string): Manifest {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new Error(`cannot read manifest ${path}: ${(err as Error).message}`);
  }
  const manifest = JSON.parse(text) as Manifest;
  if (!Array.isArray(manifest.datasets)) {
    throw new Error(`manifest ${path} has no datasets array`);
  }
  return manifest;
}

export function manifestPathFor(datasetPath: string): string {
  return join(dirname(datasetPath), "manifest.json");
}

/** Entry for a dataset file, matched by file name. */
export function entryFor(manifest: Manifest, datasetPath: string): ManifestEntry {
  const name = basename(datasetPath);
  const entry = manifest.datasets.find((e) => e.file === name);
  if (!entry) {
    throw new Error(`manifest has no entry for dataset ${name}`);
  }
  return entry;
}

export function sha256Hex(data: Buffer): string {
  return createHash("sha256").update(data).digest("hex");
}

/** Read the dataset and verify it against the manifest checksum. */
export function readVerified(datasetPath: string, entry: ManifestEntry): Buffer {
  let data: Buffer;
  try {
    data = readFileSync(datasetPath);
  } catch (err) {
    throw new Error(`cannot read dataset ${datasetPath}: ${(err as Error).message}`);
  }
  const digest = sha256Hex(data);
  if (digest !== entry.sha256) {
    throw new Error(
      `dataset ${datasetPath} does not match the manifest checksum ` +
        `(got ${digest.slice(0, 12)}..., manifest ${entry.sha256.slice(0, 12)}...)`,
    );
  }
  return data;
}
