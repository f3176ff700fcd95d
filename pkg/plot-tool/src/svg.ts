/** Minimal deterministic SVG assembly: fixed canvas, no timestamps. */

export const WIDTH = 800;
export const HEIGHT = 560;
export const MARGIN = { left: 80, right: 24, top: 40, bottom: 56 };

const px = (v: number): string => Number(v.toFixed(2)).toString();

export class SvgDoc {
  private parts: string[] = [];

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${px(x)}" y="${px(y)}" width="${px(w)}" height="${px(h)}" fill="${fill}"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): void {
    this.parts.push(
      `<line x1="${px(x1)}" y1="${px(y1)}" x2="${px(x2)}" y2="${px(y2)}" ` +
        `stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string): void {
    const pts = points.map(([x, y]) => `${px(x)},${px(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="1.5"/>`,
    );
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${px(x)}" cy="${px(y)}" r="${r}" fill="${fill}"/>`);
  }

  text(x: number, y: number, s: string, opts: { anchor?: string; size?: number; rotate?: boolean } = {}): void {
    const anchor = opts.anchor ?? "middle";
    const size = opts.size ?? 13;
    const transform = opts.rotate ? ` transform="rotate(-90 ${px(x)} ${px(y)})"` : "";
    this.parts.push(
      `<text x="${px(x)}" y="${px(y)}" text-anchor="${anchor}" ` +
        `font-family="sans-serif" font-size="${size}"${transform}>${escapeXml(s)}</text>`,
    );
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}">\n<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export const SERIES_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/** Blue-white-red map on [0, 1], matched at the ends for symmetry. */
export function diverging(t: number): string {
  const u = Math.max(0, Math.min(1, t));
  const mix = (a: number, b: number, s: number) => Math.round(a + (b - a) * s);
  let r: number, g: number, b: number;
  if (u < 0.5) {
    const s = u / 0.5;
    [r, g, b] = [mix(33, 247, s), mix(102, 247, s), mix(172, 247, s)];
  } else {
    const s = (u - 0.5) / 0.5;
    [r, g, b] = [mix(247, 178, s), mix(247, 24, s), mix(247, 43, s)];
  }
  return `rgb(${r},${g},${b})`;
}
