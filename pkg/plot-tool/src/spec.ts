/** Plot specification files: the same flat `key = value` format the
 * solver uses for its run configuration.
 */

export interface PlotSpec {
  input: string;
  kind: "timeseries" | "loglog" | "semilog" | "heatmap";
  output: string;
  schema?: string;
  x?: string;
  y?: string;
  seriesBy?: string;
  title?: string;
  xlabel?: string;
  ylabel?: string;
  bins?: number;
}

export class SpecError extends Error {}

const KINDS = new Set(["timeseries", "loglog", "semilog", "heatmap"]);

export function parseKeyValues(text: string): Map<string, string> {
  const out = new Map<string, string>();
  text.split(/\r?\n/).forEach((raw, i) => {
    const line = raw.trim();
    if (!line || line.startsWith("#")) return;
    const eq = line.indexOf("=");
    if (eq < 0) throw new SpecError(`line ${i + 1}: expected 'key = value'`);
    out.set(line.slice(0, eq).trim(), line.slice(eq + 1).trim());
  });
  return out;
}

export function parsePlotSpec(text: string): PlotSpec {
  const kv = parseKeyValues(text);
  for (const key of ["input", "kind", "output"]) {
    if (!kv.has(key)) throw new SpecError(`missing required key '${key}'`);
  }
  const kind = kv.get("kind")!;
  if (!KINDS.has(kind)) {
    throw new SpecError(`unknown kind '${kind}'; choose from ${[...KINDS].join(" | ")}`);
  }
  return {
    input: kv.get("input")!,
    kind: kind as PlotSpec["kind"],
    output: kv.get("output")!,
    schema: kv.get("schema"),
    x: kv.get("x"),
    y: kv.get("y"),
    seriesBy: kv.get("series_by"),
    title: kv.get("title"),
    xlabel: kv.get("xlabel"),
    ylabel: kv.get("ylabel"),
    bins: kv.has("bins") ? Number(kv.get("bins")) : undefined,
  };
}
