import { describe, expect, it } from "vitest";

import { FIGURES, buildSeries, countTrials } from "../src/figures";
import { Row } from "../src/csv";

const ALPHA = FIGURES.find((f) => f.scenario === "alpha")!;
const CONV = FIGURES.find((f) => f.scenario === "convergence")!;

function alphaRow(trial: number, alpha: string, j: string, scheme: string, se: string): Row {
  return {
    scenario: "alpha", trial_seed: String(trial), alpha, j_cells: j,
    scheme, se, converged: "1", outer_iters: "3", outage: "0",
  };
}

describe("buildSeries", () => {
  it("groups scheme x cell-count into four labelled series", () => {
    const rows: Row[] = [];
    for (const trial of [0, 1]) {
      for (const alpha of ["0.1", "0.5"]) {
        for (const j of ["2", "5"]) {
          for (const scheme of ["bc", "nb"]) {
            rows.push(alphaRow(trial, alpha, j, scheme, scheme === "bc" ? "4.0" : "3.0"));
          }
        }
      }
    }
    const series = buildSeries(rows, ALPHA);
    expect(series.map((s) => s.label)).toEqual([
      "NOMA-BC J=2", "NOMA-BC J=5", "NOMA-NB J=2", "NOMA-NB J=5",
    ]);
    for (const s of series) {
      expect(s.points.map((p) => p[0])).toEqual([0.1, 0.5]);
    }
  });

  it("averages se across trials at each x", () => {
    const rows = [
      alphaRow(0, "0.1", "2", "bc", "2.0"),
      alphaRow(1, "0.1", "2", "bc", "4.0"),
      alphaRow(2, "0.1", "2", "bc", "6.0"),
    ];
    const series = buildSeries(rows, ALPHA);
    expect(series).toHaveLength(1);
    expect(series[0].points).toEqual([[0.1, 4.0]]);
  });

  it("sorts points by x even when rows arrive shuffled", () => {
    const rows = [
      alphaRow(0, "0.9", "2", "bc", "1.0"),
      alphaRow(0, "0.1", "2", "bc", "3.0"),
      alphaRow(0, "0.5", "2", "bc", "2.0"),
    ];
    const [s] = buildSeries(rows, ALPHA);
    expect(s.points.map((p) => p[0])).toEqual([0.1, 0.5, 0.9]);
  });

  it("convergence groups by scheme only", () => {
    const rows: Row[] = [];
    for (const scheme of ["bc", "nb"]) {
      for (const it of ["1", "2", "3"]) {
        rows.push({
          scenario: "convergence", trial_seed: "0", iteration: it,
          scheme, se: "5.0", converged: "1", outer_iters: "3", outage: "0",
        });
      }
    }
    const series = buildSeries(rows, CONV);
    expect(series.map((s) => s.label)).toEqual(["NOMA-BC", "NOMA-NB"]);
    expect(series[0].points).toHaveLength(3);
  });

  it("chokes on a non-numeric se cell", () => {
    const rows = [alphaRow(0, "0.1", "2", "bc", "n/a")];
    expect(() => buildSeries(rows, ALPHA)).toThrow('non-numeric value "n/a"');
  });
});

describe("countTrials", () => {
  it("counts distinct trial seeds", () => {
    const rows = [
      alphaRow(0, "0.1", "2", "bc", "1"),
      alphaRow(0, "0.5", "2", "bc", "1"),
      alphaRow(7, "0.1", "2", "bc", "1"),
    ];
    expect(countTrials(rows)).toBe(2);
  });
});
