/** Stable per-estimator styling so figures are comparable across runs. */

export const BASELINE_NAME = "good_sample_mean";

/** FNV-1a 32-bit hash; stable across platforms and runs. */
export function nameHash(name: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < name.length; i++) {
    hash ^= name.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash >>> 0;
}

export function colorFor(name: string): string {
  if (name === BASELINE_NAME) {
    return "#222222";
  }
  const hue = nameHash(name) % 360;
  const sat = 55 + (nameHash(name + "#s") % 25);
  const light = 32 + (nameHash(name + "#l") % 18);
  return `hsl(${hue}, ${sat}%, ${light}%)`;
}

export function dashFor(name: string): string | undefined {
  return name === BASELINE_NAME ? "6 4" : undefined;
}
