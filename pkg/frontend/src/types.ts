/** Wire types mirroring the HTTP API documents. */

export type Vec3 = [number, number, number];
export type Quat = [number, number, number, number]; // w, x, y, z

export type Visibility = "visible" | "collapsed" | "filtered-out" | "lod-skipped";

export interface SphereShape {
  kind: "sphere";
  center: Vec3;
  radius: number;
}

export interface MeshShape {
  kind: "mesh";
  vertices: Vec3[];
  triangles: [number, number, number][];
}

export type Shape = SphereShape | MeshShape;

export interface SceneEntry {
  branch: string;
  index: number;
  id: string;
  shape: Shape;
  position: Vec3;
  quaternion: Quat;
  scale: number;
  visibility: Visibility;
  color: Vec3;
  clipped: boolean;
}

export interface SceneGap {
  branch: string;
  start: number;
  end: number;
  position: Vec3;
  count: number;
}

export interface SceneDoc {
  design: unknown;
  central: [string, number];
  uniform_scale: number;
  placements: SceneEntry[];
  gaps: SceneGap[];
}

export interface DatasetMetaDoc {
  name: string;
  time_unit: string;
  space_unit: string;
  time_point_count: number;
  snapshot_count: number;
  extent: number;
  fields: { name: string; kind: "numerical" | "categorical" }[];
}

export interface PresetEntry {
  name: string;
  design: unknown;
}

export interface SessionStateDoc {
  design: unknown;
  central: [string, number];
  selection: { root: string; members: string[]; intervals: [number, number][] }[];
  filters: { field: string; min: number | null; max: number | null }[];
  collapses: { branch: string; start: number; end: number }[];
  lod_stride: number;
  cutaway: unknown;
  color_field: string | null;
  global_rotation: Quat;
  global_scale: number;
}

/** Actions in their POST body form. */
export type ActionDoc =
  | { kind: "scroll"; delta: number }
  | { kind: "jump"; branch: string; index: number }
  | { kind: "select-object"; id: string; include_lineage?: boolean }
  | { kind: "deselect"; id: string }
  | { kind: "set-filter"; field: string; min: number | null; max: number | null }
  | { kind: "collapse"; branch: string; start: number; end: number }
  | { kind: "extend"; branch: string; start: number; end: number }
  | { kind: "set-lod"; stride: number }
  | { kind: "set-cutaway"; operator: unknown }
  | { kind: "set-color-field"; field: string | null }
  | { kind: "rotate"; quaternion: Quat }
  | { kind: "scale"; factor: number };
