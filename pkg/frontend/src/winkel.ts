// Winkel tripel projection for fields sampled in spherical coordinates.
// theta is the colatitude in [0, pi], phi the azimuth in [0, 2pi]; internally
// latitude = pi/2 - theta and longitude = phi - pi, so the azimuth midpoint
// phi = pi lands on the central meridian x = 0 and phi = 0 on the map's
// left edge. Pure math, no rendering concerns.

export const STANDARD_PARALLEL = Math.acos(2 / Math.PI);
const COS_STANDARD_PARALLEL = 2 / Math.PI; // cos(acos(2/pi))

export interface ProjectedPoint {
  x: number;
  y: number;
}

const clamp = (value: number, lo: number, hi: number): number =>
  Math.min(Math.max(value, lo), hi);

// alpha / sin(alpha) with the removable singularity at alpha = 0 filled in
const inverseSinc = (alpha: number): number =>
  Math.abs(Math.sin(alpha)) > 1e-12 ? alpha / Math.sin(alpha) : 1;

export function projectWinkelTripel(theta: number, phi: number): ProjectedPoint {
  const lat = Math.PI / 2 - clamp(theta, 0, Math.PI);
  const lon = clamp(phi - Math.PI, -Math.PI, Math.PI);

  const cosLat = Math.cos(lat);
  const alpha = Math.acos(clamp(cosLat * Math.cos(lon / 2), -1, 1));
  const stretch = inverseSinc(alpha);

  const x = (2 * cosLat * Math.sin(lon / 2) * stretch + lon * COS_STANDARD_PARALLEL) / 2;
  const y = (Math.sin(lat) * stretch + lat) / 2;
  return { x, y };
}

// Tight extent of the projected sphere: |x| peaks at the equatorial edges
// (theta = pi/2, phi = 0 or 2pi), |y| at the poles.
export const MAP_BOUNDS = {
  xMax: 1 + Math.PI / 2,
  yMax: Math.PI / 2,
} as const;
