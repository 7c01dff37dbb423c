/** Orbit camera state and math, kept free of rendering concerns. */

import type { Vec3 } from "./types.js";

export interface OrbitCamera {
  target: Vec3;
  distance: number;
  azimuth: number; // radians around +y
  elevation: number; // radians above the horizon
}

const MIN_DISTANCE = 1e-3;
const MAX_ELEVATION = Math.PI / 2 - 1e-3;

export function defaultCamera(extent: number): OrbitCamera {
  return {
    target: [0, 0, 0],
    distance: Math.max(4 * extent, 1),
    azimuth: 0,
    elevation: 0.3,
  };
}

/** Distance stays strictly positive, elevation clear of the poles. */
export function clampCamera(camera: OrbitCamera): OrbitCamera {
  return {
    ...camera,
    distance: Math.max(camera.distance, MIN_DISTANCE),
    elevation: Math.min(Math.max(camera.elevation, -MAX_ELEVATION), MAX_ELEVATION),
  };
}

export function orbit(camera: OrbitCamera, dAzimuth: number, dElevation: number): OrbitCamera {
  return clampCamera({
    ...camera,
    azimuth: camera.azimuth + dAzimuth,
    elevation: camera.elevation + dElevation,
  });
}

export function dolly(camera: OrbitCamera, factor: number): OrbitCamera {
  return clampCamera({ ...camera, distance: camera.distance * factor });
}

/** Eye position: azimuth 0 / elevation 0 looks down -z from (0,0,d). */
export function eyePosition(camera: OrbitCamera): Vec3 {
  const { target, distance, azimuth, elevation } = camera;
  const horizontal = distance * Math.cos(elevation);
  return [
    target[0] + horizontal * Math.sin(azimuth),
    target[1] + distance * Math.sin(elevation),
    target[2] + horizontal * Math.cos(azimuth),
  ];
}
