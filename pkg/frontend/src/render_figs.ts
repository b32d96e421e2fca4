#!/usr/bin/env node
/**
 * render_figs — turn the simulator's scenario CSVs into line charts.
 *
 * Usage:
 *   render_figs <csv_dir> <out_dir>
 *
 * Expects convergence.csv, alpha.csv and power.csv in <csv_dir>; writes
 * one SVG per scenario plus figure_data.json into <out_dir>. Any schema
 * mismatch (renamed/missing column, empty file) aborts with exit code 1.
 */

import { renderAll } from "./run";

function main(): void {
  const args = process.argv.slice(2);
  if (args.length !== 2) {
    console.error("usage: render_figs <csv_dir> <out_dir>");
    process.exit(2);
  }
  const summary = renderAll(args[0], args[1]);
  for (const f of summary.figures) {
    console.log(`SVG → ${f.svgPath} (${f.series} series, ${f.rows} rows)`);
  }
  console.log(`data → ${summary.sidecarPath}`);
}

try {
  main();
} catch (err) {
  console.error(`render_figs: ${err instanceof Error ? err.message : err}`);
  process.exit(1);
}
