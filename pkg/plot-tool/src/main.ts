/** plot-tool <spec-file>: render one CSV to a deterministic SVG image.
 *
 * Exit codes: 0 on success, 2 on spec/schema problems (with a column
 * diff on stderr), 1 on anything else.
 */
import { readFileSync, writeFileSync, existsSync } from "node:fs";

import { checksumArrays } from "./checksum.js";
import { SchemaError, numericColumn, parseCsv, requireColumns } from "./csv.js";
import { RenderResult, renderHeatmap, renderLogLog, renderSemilog, renderTimeseries } from "./plots.js";
import { PlotSpec, SpecError, parsePlotSpec } from "./spec.js";

/** Default axis columns per schema so spec files stay short. */
const DEFAULTS: Record<string, { x: string; y: string; seriesBy?: string }> = {
  error_vs_time: { x: "t", y: "l2_error" },
  mass_vs_time: { x: "t", y: "drift" },
  h_convergence: { x: "h", y: "l2_error", seriesBy: "degree" },
  p_convergence: { x: "p", y: "l2_error", seriesBy: "p_t" },
  dispersion: { x: "omega", y: "velocity_error", seriesBy: "p_t" },
  conservation: { x: "t", y: "drift" },
};

export function renderSpec(spec: PlotSpec): RenderResult {
  if (!existsSync(spec.input)) {
    throw new SpecError(`input file does not exist: ${spec.input}`);
  }
  const table = parseCsv(readFileSync(spec.input, "utf8"));
  if (spec.schema && spec.schema !== table.schema) {
    throw new SchemaError(
      `expected schema '${spec.schema}', file carries '${table.schema}'`,
    );
  }
  const axes = { title: spec.title, xlabel: spec.xlabel, ylabel: spec.ylabel };
  if (spec.kind === "heatmap") {
    requireColumns(table, ["x", "y", "value"]);
    return renderHeatmap(table, axes, spec.bins ?? 64);
  }
  const dflt = DEFAULTS[table.schema];
  const x = spec.x ?? dflt?.x;
  const y = spec.y ?? dflt?.y;
  if (!x || !y) {
    throw new SpecError(
      `schema '${table.schema}' has no default axes; set x = and y = in the spec`,
    );
  }
  requireColumns(table, [x, y]);
  const by = spec.seriesBy ?? dflt?.seriesBy;
  const byChecked = by && table.columns.includes(by) ? by : undefined;
  const render = {
    timeseries: renderTimeseries,
    semilog: renderSemilog,
    loglog: renderLogLog,
  }[spec.kind];
  return render(table, x, y, axes, byChecked);
}

export function main(argv: string[]): number {
  if (argv.length !== 1) {
    console.error("usage: plot-tool <spec-file>");
    return 2;
  }
  try {
    const spec = parsePlotSpec(readFileSync(argv[0], "utf8"));
    const result = renderSpec(spec);
    writeFileSync(spec.output, result.svg);
    console.log(`wrote ${spec.output}`);
    console.log(`checksum ${checksumArrays(result.plotted)}`);
    return 0;
  } catch (err) {
    if (err instanceof SpecError || err instanceof SchemaError) {
      console.error(`error: ${(err as Error).message}`);
      return 2;
    }
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("main.js")) {
  process.exit(main(process.argv.slice(2)));
}
