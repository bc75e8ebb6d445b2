// Piecewise-linear fit of the viridis colormap (17 anchors from the
// reference 256-entry table). Perceptually uniform, colorblind-safe, and
// cheap enough to evaluate per grid cell.

const ANCHORS: ReadonlyArray<readonly [number, number, number]> = [
  [0x44, 0x01, 0x54],
  [0x48, 0x18, 0x6a],
  [0x47, 0x2d, 0x7b],
  [0x42, 0x40, 0x86],
  [0x3b, 0x52, 0x8b],
  [0x33, 0x63, 0x8d],
  [0x2c, 0x72, 0x8e],
  [0x26, 0x82, 0x8e],
  [0x21, 0x91, 0x8c],
  [0x1f, 0xa0, 0x88],
  [0x28, 0xae, 0x80],
  [0x3f, 0xbc, 0x73],
  [0x5e, 0xc9, 0x62],
  [0x84, 0xd4, 0x4b],
  [0xad, 0xdc, 0x30],
  [0xd8, 0xe2, 0x19],
  [0xfd, 0xe7, 0x25],
];

const hex2 = (v: number): string => Math.round(v).toString(16).padStart(2, "0");

export function viridis(t: number): string {
  const clamped = Math.min(Math.max(t, 0), 1);
  const pos = clamped * (ANCHORS.length - 1);
  const lo = Math.min(Math.floor(pos), ANCHORS.length - 2);
  const frac = pos - lo;
  const a = ANCHORS[lo] as readonly [number, number, number];
  const b = ANCHORS[lo + 1] as readonly [number, number, number];
  const mix = (i: 0 | 1 | 2) => a[i] + (b[i] - a[i]) * frac;
  return `#${hex2(mix(0))}${hex2(mix(1))}${hex2(mix(2))}`;
}

// Normalizer onto [0, 1]; a degenerate range maps everything to midscale.
export function normalizer(lo: number, hi: number): (value: number) => number {
  if (!(hi > lo)) {
    return () => 0.5;
  }
  return (value: number) => (value - lo) / (hi - lo);
}
