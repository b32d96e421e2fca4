/**
 * Figure definitions and series aggregation.
 *
 * One figure per scenario CSV. Every figure plots mean spectral efficiency
 * on the y axis; rows are grouped into one line per treatment combination
 * and averaged across trials at each x value.
 */

import { Row, num } from "./csv";

export interface Series {
  label: string;
  points: [number, number][]; // [x, mean se], sorted by x
}

export interface FigureDef {
  scenario: string; // csv stem and output stem
  columns: string[]; // exact expected header
  x: string;
  groupBy: string[];
  title: string;
  xLabel: string;
}

const SCHEME_NAMES: Record<string, string> = {
  bc: "NOMA-BC",
  nb: "NOMA-NB",
};

export const FIGURES: FigureDef[] = [
  {
    scenario: "convergence",
    columns: ["scenario", "trial_seed", "iteration", "scheme", "se", "converged", "outer_iters", "outage"],
    x: "iteration",
    groupBy: ["scheme"],
    title: "Network SE vs outer iteration",
    xLabel: "Iteration",
  },
  {
    scenario: "alpha",
    columns: ["scenario", "trial_seed", "alpha", "j_cells", "scheme", "se", "converged", "outer_iters", "outage"],
    x: "alpha",
    groupBy: ["scheme", "j_cells"],
    title: "Network SE vs residual SIC factor",
    xLabel: "Residual SIC factor α",
  },
  {
    scenario: "power",
    columns: ["scenario", "trial_seed", "p_tot_dbm", "r_req", "scheme", "se", "converged", "outer_iters", "outage"],
    x: "p_tot_dbm",
    groupBy: ["scheme", "r_req"],
    title: "Network SE vs total power budget",
    xLabel: "Total power budget (dBm)",
  },
];

function labelFor(row: Row, groupBy: string[]): string {
  const parts: string[] = [];
  for (const col of groupBy) {
    const v = row[col];
    if (col === "scheme") {
      parts.push(SCHEME_NAMES[v] ?? v);
    } else if (col === "j_cells") {
      parts.push(`J=${v}`);
    } else if (col === "r_req") {
      parts.push(`R=${v}`);
    } else {
      parts.push(`${col}=${v}`);
    }
  }
  return parts.join(" ");
}

/** Group rows into labelled series and average se per x value. */
export function buildSeries(rows: Row[], fig: FigureDef): Series[] {
  const name = `${fig.scenario}.csv`;
  // label -> x -> [sum, count]
  const acc = new Map<string, Map<number, [number, number]>>();
  for (const row of rows) {
    const label = labelFor(row, fig.groupBy);
    const x = num(row, fig.x, name);
    const y = num(row, "se", name);
    let byX = acc.get(label);
    if (!byX) {
      byX = new Map();
      acc.set(label, byX);
    }
    const cell = byX.get(x);
    if (cell) {
      cell[0] += y;
      cell[1] += 1;
    } else {
      byX.set(x, [y, 1]);
    }
  }

  const series: Series[] = [];
  for (const [label, byX] of acc) {
    const points = [...byX.entries()]
      .map(([x, [sum, n]]): [number, number] => [x, sum / n])
      .sort((a, b) => a[0] - b[0]);
    series.push({ label, points });
  }
  series.sort((a, b) => a.label.localeCompare(b.label));
  return series;
}

/** Distinct trial count, for the figure subtitle. */
export function countTrials(rows: Row[]): number {
  return new Set(rows.map((r) => r.trial_seed)).size;
}
