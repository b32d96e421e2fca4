/**
 * Hand-rolled SVG line charts — no rendering dependency, byte-stable output.
 */

import { Series } from "./figures";

export interface ChartOpts {
  title: string;
  subtitle?: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
}

const COLORS = ["#4361ee", "#e63946", "#2d6a4f", "#f4a261", "#9d4edd", "#555"];

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough) ?? rough;
  const start = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= max + step * 0.01; v += step) ticks.push(v);
  return ticks;
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 100 || Number.isInteger(v)) return String(Math.round(v));
  return a >= 1 ? v.toFixed(1) : v.toFixed(2);
}

export function lineChart(opts: ChartOpts): string {
  const { series } = opts;

  // Layout
  const W = 640, H = 400;
  const ml = 56, mr = 16, mt = 44, mb = 48;
  const pw = W - ml - mr;
  const ph = H - mt - mb;

  // Data ranges (pad y a little so lines don't sit on the frame)
  const xs = series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = series.flatMap((s) => s.points.map((p) => p[1]));
  const xMin = Math.min(...xs), xMax = Math.max(...xs);
  const yLo = Math.min(...ys), yHi = Math.max(...ys);
  const pad = (yHi - yLo || Math.abs(yHi) || 1) * 0.06;
  const yMin = yLo - pad, yMax = yHi + pad;

  const xOf = (v: number) => ml + ((v - xMin) / (xMax - xMin || 1)) * pw;
  const yOf = (v: number) => mt + ph - ((v - yMin) / (yMax - yMin || 1)) * ph;

  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<rect width="${W}" height="${H}" fill="#fff"/>\n`;

  s += `<text x="${ml}" y="18" font-size="13" font-weight="600" fill="#222">${esc(opts.title)}</text>\n`;
  if (opts.subtitle) {
    s += `<text x="${ml}" y="32" font-size="9" fill="#888">${esc(opts.subtitle)}</text>\n`;
  }

  // Grid + y ticks
  const yTicks = niceTicks(yMin, yMax, 6);
  for (const v of yTicks) {
    const y = yOf(v);
    s += `<line x1="${ml}" y1="${y.toFixed(1)}" x2="${ml + pw}" y2="${y.toFixed(1)}" stroke="#eee" stroke-width="0.6"/>\n`;
    s += `<text x="${ml - 6}" y="${(y + 3).toFixed(1)}" text-anchor="end" font-size="9" fill="#555">${esc(fmtTick(v))}</text>\n`;
  }

  // x ticks
  for (const v of niceTicks(xMin, xMax, 7)) {
    const x = xOf(v);
    s += `<line x1="${x.toFixed(1)}" y1="${mt + ph}" x2="${x.toFixed(1)}" y2="${mt + ph + 4}" stroke="#333" stroke-width="0.6"/>\n`;
    s += `<text x="${x.toFixed(1)}" y="${mt + ph + 15}" text-anchor="middle" font-size="9" fill="#555">${esc(fmtTick(v))}</text>\n`;
  }

  // Series: solid for the backscatter scheme, dashed for the baseline,
  // point markers when the grid is sparse enough to see them.
  series.forEach((sr, i) => {
    const color = COLORS[i % COLORS.length];
    const dash = sr.label.includes("NOMA-NB") ? ` stroke-dasharray="6,3"` : "";
    const pts = sr.points.map(([x, y]) => `${xOf(x).toFixed(1)},${yOf(y).toFixed(1)}`).join(" ");
    s += `<polyline fill="none" stroke="${color}" stroke-width="1.5"${dash} points="${pts}"/>\n`;
    if (sr.points.length <= 25) {
      for (const [x, y] of sr.points) {
        s += `<circle cx="${xOf(x).toFixed(1)}" cy="${yOf(y).toFixed(1)}" r="2.2" fill="${color}"/>\n`;
      }
    }
  });

  // Axes frame
  s += `<line x1="${ml}" y1="${mt}" x2="${ml}" y2="${mt + ph}" stroke="#333" stroke-width="0.8"/>\n`;
  s += `<line x1="${ml}" y1="${mt + ph}" x2="${ml + pw}" y2="${mt + ph}" stroke="#333" stroke-width="0.8"/>\n`;

  s += `<text x="${ml + pw / 2}" y="${H - 8}" text-anchor="middle" font-size="11" fill="#333">${esc(opts.xLabel)}</text>\n`;
  s += `<text x="14" y="${mt + ph / 2}" text-anchor="middle" font-size="11" fill="#333" transform="rotate(-90,14,${mt + ph / 2})">${esc(opts.yLabel)}</text>\n`;

  // Legend (bottom-right of the plot area; the curves climb to the left)
  const legendW = Math.max(...series.map((sr) => sr.label.length)) * 5.4 + 30;
  const legendH = series.length * 13 + 8;
  const lx = ml + pw - legendW - 6;
  const ly = mt + ph - legendH - 6;
  s += `<rect x="${lx}" y="${ly}" width="${legendW}" height="${legendH}" rx="3" fill="white" fill-opacity="0.88" stroke="#ddd" stroke-width="0.5"/>\n`;
  series.forEach((sr, i) => {
    const color = COLORS[i % COLORS.length];
    const dash = sr.label.includes("NOMA-NB") ? ` stroke-dasharray="6,3"` : "";
    const yy = ly + 11 + i * 13;
    s += `<line x1="${lx + 6}" y1="${yy}" x2="${lx + 22}" y2="${yy}" stroke="${color}" stroke-width="1.5"${dash}/>\n`;
    s += `<text x="${lx + 26}" y="${yy + 3}" font-size="9" fill="#333">${esc(sr.label)}</text>\n`;
  });

  s += `</svg>\n`;
  return s;
}
