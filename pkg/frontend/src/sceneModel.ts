/** Pure interpretation of scene documents and user input.
 *
 * Everything the renderer draws and every action the panel dispatches is
 * derived here, with no 3D library or DOM dependency, so the contract is
 * unit-testable.  The frame is a function of the last fetched scene
 * alone; no layout math is duplicated client-side.
 */

import type { ActionDoc, SceneDoc, SceneEntry, SceneGap, Vec3, Quat } from "./types.js";

export interface Drawable {
  id: string;
  branch: string;
  index: number;
  shape: SceneEntry["shape"];
  position: Vec3;
  quaternion: Quat;
  scale: number;
  color: Vec3;
  clipped: boolean;
  central: boolean;
}

export interface GapMarker {
  branch: string;
  position: Vec3;
  label: string;
  count: number;
}

export interface Frame {
  drawables: Drawable[];
  gapMarkers: GapMarker[];
  central: [string, number];
  hiddenCounts: { collapsed: number; filteredOut: number; lodSkipped: number };
}

export function gapLabel(gap: SceneGap): string {
  return `${gap.count} hidden`;
}

/** One drawable per visible placement; everything else is counted, not drawn. */
export function buildFrame(scene: SceneDoc): Frame {
  const [centralBranch, centralIndex] = scene.central;
  const drawables: Drawable[] = [];
  const hidden = { collapsed: 0, filteredOut: 0, lodSkipped: 0 };
  for (const entry of scene.placements) {
    if (entry.visibility !== "visible") {
      if (entry.visibility === "collapsed") hidden.collapsed += 1;
      else if (entry.visibility === "filtered-out") hidden.filteredOut += 1;
      else hidden.lodSkipped += 1;
      continue;
    }
    drawables.push({
      id: entry.id,
      branch: entry.branch,
      index: entry.index,
      shape: entry.shape,
      position: entry.position,
      quaternion: entry.quaternion,
      scale: entry.scale,
      color: entry.color,
      clipped: entry.clipped,
      central: entry.branch === centralBranch && entry.index === centralIndex,
    });
  }
  const gapMarkers = scene.gaps.map((gap) => ({
    branch: gap.branch,
    position: gap.position,
    label: gapLabel(gap),
    count: gap.count,
  }));
  return { drawables, gapMarkers, central: scene.central, hiddenCounts: hidden };
}

// --- input mapping ---------------------------------------------------------

/** Wheel steps one time point per notch; direction follows the sign. */
export function wheelToAction(deltaY: number): ActionDoc | null {
  if (deltaY === 0 || !Number.isFinite(deltaY)) return null;
  return { kind: "scroll", delta: deltaY > 0 ? 1 : -1 };
}

/** A slider drag lands as ONE Jump to the release position, never a
 * burst of Scrolls: dragging by +5 must produce a single action. */
export function sliderToAction(
  branch: string,
  fromIndex: number,
  toIndex: number
): ActionDoc | null {
  if (toIndex === fromIndex) return null;
  return { kind: "jump", branch, index: toIndex };
}

export type SceneHit =
  | { kind: "time-point"; branch: string; index: number }
  | { kind: "object"; id: string };

/** Click on a station jumps there; click on an object selects it. */
export function clickToAction(hit: SceneHit): ActionDoc {
  if (hit.kind === "time-point") {
    return { kind: "jump", branch: hit.branch, index: hit.index };
  }
  return { kind: "select-object", id: hit.id };
}

// --- panel validation ------------------------------------------------------

/** Panel edits validate locally before any dispatch; null means "do not
 * send", with the reason surfaced separately. */
export interface Rejection {
  reason: string;
}

export function filterAction(
  field: string,
  lo: number | null,
  hi: number | null
): ActionDoc | Rejection {
  if (!field) return { reason: "pick a field to filter on" };
  if (lo !== null && !Number.isFinite(lo)) return { reason: "lower bound is not a number" };
  if (hi !== null && !Number.isFinite(hi)) return { reason: "upper bound is not a number" };
  if (lo !== null && hi !== null && lo > hi) {
    return { reason: "lower bound exceeds upper bound" };
  }
  return { kind: "set-filter", field, min: lo, max: hi };
}

export function lodAction(stride: number): ActionDoc | Rejection {
  if (!Number.isInteger(stride) || stride < 1) {
    return { reason: "stride must be a positive integer" };
  }
  return { kind: "set-lod", stride };
}

export function collapseAction(
  branch: string,
  start: number,
  end: number
): ActionDoc | Rejection {
  if (!branch) return { reason: "pick a branch to collapse" };
  if (!Number.isInteger(start) || !Number.isInteger(end) || start < 0 || end < start) {
    return { reason: "collapse range must be 0 <= start <= end" };
  }
  return { kind: "collapse", branch, start, end };
}

export function isRejection(value: ActionDoc | Rejection): value is Rejection {
  return (value as Rejection).reason !== undefined;
}
