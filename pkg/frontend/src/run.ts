/**
 * Batch renderer: three scenario CSVs in, three SVGs plus a sidecar
 * data dump out. The sidecar (figure_data.json) holds the exact plotted
 * points so a rerun on identical CSVs can be diffed byte for byte.
 */

import { readFileSync, writeFileSync, mkdirSync } from "fs";
import path from "path";

import { parseTable } from "./csv";
import { FIGURES, Series, buildSeries, countTrials } from "./figures";
import { lineChart } from "./svg";

export interface RenderSummary {
  figures: { scenario: string; svgPath: string; series: number; rows: number }[];
  sidecarPath: string;
}

export function renderAll(csvDir: string, outDir: string): RenderSummary {
  mkdirSync(outDir, { recursive: true });

  const sidecar: Record<string, Series[]> = {};
  const summary: RenderSummary = { figures: [], sidecarPath: path.join(outDir, "figure_data.json") };

  for (const fig of FIGURES) {
    const csvPath = path.join(csvDir, `${fig.scenario}.csv`);
    let text: string;
    try {
      text = readFileSync(csvPath, "utf-8");
    } catch (err) {
      throw new Error(`cannot read ${csvPath}: ${(err as Error).message}`);
    }
    const rows = parseTable(text, `${fig.scenario}.csv`, fig.columns);
    const series = buildSeries(rows, fig);

    const svg = lineChart({
      title: fig.title,
      subtitle: `${countTrials(rows)} trials, ${rows.length} rows`,
      xLabel: fig.xLabel,
      yLabel: "Mean SE (bps/Hz)",
      series,
    });
    const svgPath = path.join(outDir, `${fig.scenario}.svg`);
    writeFileSync(svgPath, svg);

    sidecar[fig.scenario] = series;
    summary.figures.push({ scenario: fig.scenario, svgPath, series: series.length, rows: rows.length });
  }

  writeFileSync(summary.sidecarPath, JSON.stringify(sidecar, null, 2) + "\n");
  return summary;
}
