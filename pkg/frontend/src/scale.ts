/** Minimal linear/log axis scales with round tick values. */

export interface Scale {
  map(value: number): number;
  ticks: number[];
}

export function makeScale(
  min: number,
  max: number,
  rangeLo: number,
  rangeHi: number,
  log: boolean,
): Scale {
  if (log) {
    const lo = Math.max(min, 1e-12);
    const hi = Math.max(max, lo * 10);
    const llo = Math.log10(lo);
    const lhi = Math.log10(hi);
    const span = lhi - llo || 1;
    return {
      map: (v) =>
        rangeLo +
        ((Math.log10(Math.max(v, 1e-12)) - llo) / span) * (rangeHi - rangeLo),
      ticks: logTicks(lo, hi),
    };
  }
  const pad = (max - min || Math.abs(max) || 1) * 0.05;
  const lo = min - pad;
  const hi = max + pad;
  return {
    map: (v) => rangeLo + ((v - lo) / (hi - lo)) * (rangeHi - rangeLo),
    ticks: linearTicks(lo, hi, 5),
  };
}

export function linearTicks(lo: number, hi: number, count: number): number[] {
  const span = hi - lo;
  if (span <= 0) {
    return [lo];
  }
  const step = niceStep(span / count);
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + step * 1e-9; v += step) {
    // snap away float drift so labels stay round
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

function niceStep(raw: number): number {
  const power = Math.pow(10, Math.floor(Math.log10(raw)));
  const unit = raw / power;
  if (unit < 1.5) return power;
  if (unit < 3.5) return 2 * power;
  if (unit < 7.5) return 5 * power;
  return 10 * power;
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (
    let e = Math.ceil(Math.log10(lo));
    e <= Math.floor(Math.log10(hi));
    e++
  ) {
    ticks.push(Math.pow(10, e));
  }
  return ticks.length > 0 ? ticks : [lo, hi];
}

export function formatTick(value: number): string {
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 10000 || abs < 0.001) {
    return value.toExponential(0);
  }
  return Number(value.toPrecision(6)).toString();
}
