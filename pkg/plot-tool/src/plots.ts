/** Plot renderers.
 *
 * Each renderer receives already-parsed CSV tables, extracts the exact
 * columns it will draw, and returns both the SVG text and those arrays
 * untouched so callers can verify the no-recompute invariant by
 * checksum.
 */
import { CsvTable, distinctValues, numericColumn } from "./csv.js";
import { Scale, linearScale, logScale } from "./scale.js";
import { HEIGHT, MARGIN, SERIES_COLORS, SvgDoc, WIDTH, diverging } from "./svg.js";

export interface RenderResult {
  svg: string;
  plotted: number[][];
}

export interface AxesSpec {
  title?: string;
  xlabel?: string;
  ylabel?: string;
}

interface Series {
  name: string;
  x: number[];
  y: number[];
}

function drawFrame(doc: SvgDoc, xs: Scale, ys: Scale, spec: AxesSpec): void {
  const { left, right, top, bottom } = MARGIN;
  doc.line(left, HEIGHT - bottom, WIDTH - right, HEIGHT - bottom, "#000");
  doc.line(left, top, left, HEIGHT - bottom, "#000");
  for (const t of xs.ticks()) {
    const x = xs.toPixel(t);
    doc.line(x, HEIGHT - bottom, x, HEIGHT - bottom + 5, "#000");
    doc.text(x, HEIGHT - bottom + 20, xs.label(t));
  }
  for (const t of ys.ticks()) {
    const y = ys.toPixel(t);
    doc.line(left - 5, y, left, y, "#000");
    doc.text(left - 8, y + 4, ys.label(t), { anchor: "end", size: 11 });
    doc.line(left, y, WIDTH - MARGIN.right, y, "#eee");
  }
  if (spec.title) doc.text(WIDTH / 2, 24, spec.title, { size: 16 });
  if (spec.xlabel) doc.text((left + WIDTH - right) / 2, HEIGHT - 12, spec.xlabel);
  if (spec.ylabel) doc.text(20, (top + HEIGHT - bottom) / 2, spec.ylabel, { rotate: true });
}

function finitePositive(vals: number[]): number[] {
  return vals.filter((v) => Number.isFinite(v) && v > 0);
}

function drawSeries(
  doc: SvgDoc,
  series: Series[],
  xs: Scale,
  ys: Scale,
  markers: boolean,
  annotate?: (s: Series) => string,
): void {
  series.forEach((s, i) => {
    const color = SERIES_COLORS[i % SERIES_COLORS.length];
    const pts: Array<[number, number]> = [];
    for (let k = 0; k < s.x.length; k++) {
      if (Number.isFinite(s.x[k]) && Number.isFinite(s.y[k])) {
        pts.push([xs.toPixel(s.x[k]), ys.toPixel(s.y[k])]);
      }
    }
    doc.polyline(pts, color);
    if (markers) for (const [x, y] of pts) doc.circle(x, y, 3, color);
    const label = annotate ? `${s.name} ${annotate(s)}` : s.name;
    if (series.length > 1 || annotate) {
      doc.text(WIDTH - MARGIN.right - 8, MARGIN.top + 16 * (i + 1), label, {
        anchor: "end",
        size: 12,
      });
      doc.line(
        WIDTH - MARGIN.right - 160,
        MARGIN.top + 16 * (i + 1) - 4,
        WIDTH - MARGIN.right - 140,
        MARGIN.top + 16 * (i + 1) - 4,
        color,
        2,
      );
    }
  });
}

/** Least-squares slope of log y vs log x over the positive samples. */
function logLogSlope(s: Series): number {
  const lx: number[] = [];
  const ly: number[] = [];
  for (let k = 0; k < s.x.length; k++) {
    if (s.x[k] > 0 && s.y[k] > 0) {
      lx.push(Math.log(s.x[k]));
      ly.push(Math.log(s.y[k]));
    }
  }
  const n = lx.length;
  if (n < 2) return NaN;
  const mx = lx.reduce((a, b) => a + b, 0) / n;
  const my = ly.reduce((a, b) => a + b, 0) / n;
  let num = 0;
  let den = 0;
  for (let k = 0; k < n; k++) {
    num += (lx[k] - mx) * (ly[k] - my);
    den += (lx[k] - mx) * (lx[k] - mx);
  }
  return num / den;
}

function extractSeries(table: CsvTable, xcol: string, ycol: string, by?: string): Series[] {
  if (!by) {
    return [{ name: ycol, x: numericColumn(table, xcol), y: numericColumn(table, ycol) }];
  }
  const keys = distinctValues(table, by);
  const xAll = numericColumn(table, xcol);
  const yAll = numericColumn(table, ycol);
  const byIdx = table.columns.indexOf(by);
  return keys.map((key) => {
    const x: number[] = [];
    const y: number[] = [];
    table.rows.forEach((r, i) => {
      if (r[byIdx] === key) {
        x.push(xAll[i]);
        y.push(yAll[i]);
      }
    });
    return { name: `${by}=${key}`, x, y };
  });
}

function renderXY(
  table: CsvTable,
  xcol: string,
  ycol: string,
  xlog: boolean,
  ylog: boolean,
  spec: AxesSpec,
  by?: string,
): RenderResult {
  const series = extractSeries(table, xcol, ycol, by);
  const xsAll = series.flatMap((s) => s.x).filter(Number.isFinite);
  const ysForRange = ylog
    ? series.flatMap((s) => finitePositive(s.y))
    : series.flatMap((s) => s.y).filter(Number.isFinite);
  const xmin = Math.min(...xsAll);
  const xmax = Math.max(...xsAll);
  const ymin = Math.min(...ysForRange);
  const ymax = Math.max(...ysForRange);
  const xs = (xlog ? logScale : linearScale)(xmin, xmax, MARGIN.left, WIDTH - MARGIN.right);
  const ys = (ylog ? logScale : linearScale)(
    ylog ? ymin : Math.min(ymin, 0),
    ymax,
    HEIGHT - MARGIN.bottom,
    MARGIN.top,
  );
  const doc = new SvgDoc();
  drawFrame(doc, xs, ys, spec);
  const annotate =
    xlog && ylog ? (s: Series) => `(slope ${logLogSlope(s).toFixed(2)})` : undefined;
  drawSeries(doc, series, xs, ys, true, annotate);
  return { svg: doc.render(), plotted: series.flatMap((s) => [s.x, s.y]) };
}

export function renderTimeseries(
  table: CsvTable, xcol: string, ycol: string, spec: AxesSpec, by?: string,
): RenderResult {
  return renderXY(table, xcol, ycol, false, false, spec, by);
}

export function renderSemilog(
  table: CsvTable, xcol: string, ycol: string, spec: AxesSpec, by?: string,
): RenderResult {
  return renderXY(table, xcol, ycol, false, true, spec, by);
}

export function renderLogLog(
  table: CsvTable, xcol: string, ycol: string, spec: AxesSpec, by?: string,
): RenderResult {
  return renderXY(table, xcol, ycol, true, true, spec, by);
}

/** Heatmap of scattered (x, y, value) samples binned onto a raster.
 *
 * Binning averages the samples that fall in each raster cell; it is a
 * pure rendering step on the emitted oversampled grid, no basis math.
 */
export function renderHeatmap(
  table: CsvTable,
  spec: AxesSpec,
  bins = 64,
): RenderResult {
  const x = numericColumn(table, "x");
  const y = numericColumn(table, "y");
  const v = numericColumn(table, "value");
  const xmin = Math.min(...x);
  const xmax = Math.max(...x);
  const ymin = Math.min(...y);
  const ymax = Math.max(...y);
  const sums = new Float64Array(bins * bins);
  const counts = new Float64Array(bins * bins);
  for (let i = 0; i < x.length; i++) {
    const bx = Math.min(bins - 1, Math.floor(((x[i] - xmin) / (xmax - xmin)) * bins));
    const by = Math.min(bins - 1, Math.floor(((y[i] - ymin) / (ymax - ymin)) * bins));
    sums[by * bins + bx] += v[i];
    counts[by * bins + bx] += 1;
  }
  let vmax = 0;
  for (let i = 0; i < sums.length; i++) {
    if (counts[i] > 0) vmax = Math.max(vmax, Math.abs(sums[i] / counts[i]));
  }
  if (vmax === 0) vmax = 1;

  const doc = new SvgDoc();
  const { left, right, top, bottom } = MARGIN;
  const side = Math.min(WIDTH - left - right, HEIGHT - top - bottom);
  const cell = side / bins;
  for (let by = 0; by < bins; by++) {
    for (let bx = 0; bx < bins; bx++) {
      const idx = by * bins + bx;
      if (counts[idx] === 0) continue;
      const val = sums[idx] / counts[idx];
      const color = diverging(0.5 + 0.5 * (val / vmax));
      doc.rect(left + bx * cell, top + side - (by + 1) * cell, cell + 0.5, cell + 0.5, color);
    }
  }
  if (spec.title) doc.text(WIDTH / 2, 24, spec.title, { size: 16 });
  if (spec.xlabel) doc.text(left + side / 2, HEIGHT - 12, spec.xlabel);
  if (spec.ylabel) doc.text(20, top + side / 2, spec.ylabel, { rotate: true });
  return { svg: doc.render(), plotted: [x, y, v] };
}
