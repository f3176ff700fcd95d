/** Linear and log10 axis scales with simple tick generation. */

export interface Scale {
  toPixel(v: number): number;
  ticks(): number[];
  label(v: number): string;
}

const fmt = (v: number): string => {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 10000) {
    return Number(v.toPrecision(6)).toString();
  }
  return v.toExponential(1);
};

export function linearScale(lo: number, hi: number, p0: number, p1: number): Scale {
  if (!(hi > lo)) hi = lo + 1;
  const span = hi - lo;
  const step = niceStep(span / 5);
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let t = first; t <= hi + 1e-12 * span; t += step) ticks.push(t);
  return {
    toPixel: (v) => p0 + ((v - lo) / span) * (p1 - p0),
    ticks: () => ticks,
    label: fmt,
  };
}

export function logScale(lo: number, hi: number, p0: number, p1: number): Scale {
  lo = Math.max(lo, 1e-300);
  hi = Math.max(hi, lo * 10);
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const ticks: number[] = [];
  const every = Math.max(1, Math.round((lhi - llo) / 6));
  for (let d = Math.ceil(llo); d <= Math.floor(lhi); d += every) {
    ticks.push(Math.pow(10, d));
  }
  return {
    toPixel: (v) => {
      const clamped = Math.max(v, lo); // display-only clamp for log axes
      return p0 + ((Math.log10(clamped) - llo) / (lhi - llo)) * (p1 - p0);
    },
    ticks: () => ticks,
    label: (v) => `1e${Math.round(Math.log10(v))}`,
  };
}

function niceStep(raw: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const r = raw / mag;
  if (r < 1.5) return mag;
  if (r < 3.5) return 2 * mag;
  if (r < 7.5) return 5 * mag;
  return 10 * mag;
}
