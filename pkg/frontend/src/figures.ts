/** Per-figure plotting schemas: which column is the abscissa, labels. */

import type { Dataset } from "./csv.js";
import { column } from "./csv.js";
import type { Series, PlotLayout } from "./svg.js";

export interface FigureSchema {
  xColumn: string;
  title: string;
  xLabel: string;
  yLabel: string;
}

export const FIGURE_SCHEMAS: Record<string, FigureSchema> = {
  "2": {
    xColumn: "phi",
    title: "Standard-scheme entrance absorption vs drive",
    xLabel: "spectro-spatial phase (rad)",
    yLabel: "absorption / unpumped value",
  },
  "3": {
    xColumn: "phi",
    title: "Sublevel-scheme entrance absorption vs drive",
    xLabel: "spectro-spatial phase (rad)",
    yLabel: "absorption / unpumped value",
  },
  "5": {
    xColumn: "nu_over_delta",
    title: "Replica alignment: absorption vs splitting-to-period ratio",
    xLabel: "frequency / fringe spacing",
    yLabel: "absorption / unpumped value",
  },
  "6": {
    xColumn: "phi",
    title: "Grating profiles at depth slices (small angle)",
    xLabel: "spectro-spatial phase (rad)",
    yLabel: "absorption / unpumped value",
  },
  "7": {
    xColumn: "od",
    title: "First-order diffraction efficiency vs initial optical depth",
    xLabel: "initial optical depth",
    yLabel: "diffraction efficiency",
  },
  "9-calc": {
    xColumn: "phi",
    title: "Depth-averaged absorption (collinear engraving)",
    xLabel: "spectro-spatial phase (rad)",
    yLabel: "depth-averaged absorption / unpumped value",
  },
};

export function schemaFor(figureId: string): FigureSchema {
  const schema = FIGURE_SCHEMAS[figureId];
  if (!schema) {
    const known = Object.keys(FIGURE_SCHEMAS).join(", ");
    throw new Error(`unknown figure id ${JSON.stringify(figureId)} (known: ${known})`);
  }
  return schema;
}

export function seriesFor(figureId: string, data: Dataset): Series[] {
  const schema = schemaFor(figureId);
  if (!data.columns.includes(schema.xColumn)) {
    throw new Error(
      `figure ${figureId} expects an ${JSON.stringify(schema.xColumn)} column; ` +
        `dataset has [${data.columns.join(", ")}]`,
    );
  }
  const x = column(data, schema.xColumn);
  return data.columns
    .filter((name) => name !== schema.xColumn)
    .map((name) => ({ name, x, y: column(data, name) }));
}

export function layoutFor(figureId: string): PlotLayout {
  const schema = schemaFor(figureId);
  return { title: schema.title, xLabel: schema.xLabel, yLabel: schema.yLabel };
}
