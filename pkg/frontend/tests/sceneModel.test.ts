import { describe, expect, it } from "vitest";

import {
  buildFrame,
  clickToAction,
  collapseAction,
  filterAction,
  gapLabel,
  isRejection,
  lodAction,
  sliderToAction,
  wheelToAction,
} from "../src/sceneModel";
import type { SceneDoc, SceneEntry, Visibility } from "../src/types";

function entry(overrides: Partial<SceneEntry> = {}): SceneEntry {
  return {
    branch: "timeline",
    index: 0,
    id: "a0",
    shape: { kind: "sphere", center: [0, 0, 0], radius: 0.5 },
    position: [0, 0, 0],
    quaternion: [1, 0, 0, 0],
    scale: 1,
    visibility: "visible",
    color: [0.5, 0.5, 0.5],
    clipped: false,
    ...overrides,
  };
}

function scene(entries: SceneEntry[], central: [string, number] = ["timeline", 0]): SceneDoc {
  return { design: {}, central, uniform_scale: 1, placements: entries, gaps: [] };
}

describe("buildFrame", () => {
  it("draws one drawable per visible placement", () => {
    const doc = scene([
      entry({ id: "a0", index: 0 }),
      entry({ id: "a1", index: 1 }),
      entry({ id: "a2", index: 2 }),
    ]);
    expect(buildFrame(doc).drawables).toHaveLength(3);
  });

  it("never draws collapsed, filtered, or lod-skipped placements", () => {
    const hidden: Visibility[] = ["collapsed", "filtered-out", "lod-skipped"];
    const doc = scene([
      entry({ id: "a0" }),
      ...hidden.map((visibility, i) => entry({ id: `h${i}`, index: i + 1, visibility })),
    ]);
    const frame = buildFrame(doc);
    expect(frame.drawables).toHaveLength(1);
    expect(frame.drawables[0]!.id).toBe("a0");
    expect(frame.hiddenCounts).toEqual({ collapsed: 1, filteredOut: 1, lodSkipped: 1 });
  });

  it("flags exactly the central placement", () => {
    const doc = scene(
      [entry({ id: "a0", index: 0 }), entry({ id: "a1", index: 1 })],
      ["timeline", 1]
    );
    const frame = buildFrame(doc);
    expect(frame.drawables.find((d) => d.id === "a1")!.central).toBe(true);
    expect(frame.drawables.find((d) => d.id === "a0")!.central).toBe(false);
  });

  it("keeps branch identity in the central flag", () => {
    const doc = scene(
      [entry({ id: "a0", branch: "left", index: 3 }), entry({ id: "b0", branch: "right", index: 3 })],
      ["left", 3]
    );
    const frame = buildFrame(doc);
    expect(frame.drawables.find((d) => d.id === "a0")!.central).toBe(true);
    expect(frame.drawables.find((d) => d.id === "b0")!.central).toBe(false);
  });

  it("labels gap markers with the hidden count", () => {
    const doc = scene([entry()]);
    doc.gaps = [{ branch: "timeline", start: 10, end: 19, position: [1, 0, -2], count: 10 }];
    const frame = buildFrame(doc);
    expect(frame.gapMarkers).toHaveLength(1);
    expect(frame.gapMarkers[0]!.label).toBe("10 hidden");
    expect(frame.gapMarkers[0]!.position).toEqual([1, 0, -2]);
    expect(gapLabel(doc.gaps[0]!)).toBe("10 hidden");
  });
});

describe("input mapping", () => {
  it("wheel maps to single scrolls by sign", () => {
    expect(wheelToAction(120)).toEqual({ kind: "scroll", delta: 1 });
    expect(wheelToAction(-53)).toEqual({ kind: "scroll", delta: -1 });
    expect(wheelToAction(0)).toBeNull();
    expect(wheelToAction(Number.NaN)).toBeNull();
  });

  it("a slider drag of +5 is one jump, not five scrolls", () => {
    const action = sliderToAction("timeline", 10, 15);
    expect(action).toEqual({ kind: "jump", branch: "timeline", index: 15 });
  });

  it("a slider released in place dispatches nothing", () => {
    expect(sliderToAction("timeline", 10, 10)).toBeNull();
  });

  it("clicks map to jump or select", () => {
    expect(clickToAction({ kind: "time-point", branch: "b", index: 4 })).toEqual({
      kind: "jump",
      branch: "b",
      index: 4,
    });
    expect(clickToAction({ kind: "object", id: "a3" })).toEqual({
      kind: "select-object",
      id: "a3",
    });
  });
});

describe("panel validation", () => {
  it("accepts well-formed filters including open bounds", () => {
    expect(filterAction("value", 1, 2)).toEqual({
      kind: "set-filter",
      field: "value",
      min: 1,
      max: 2,
    });
    expect(filterAction("value", null, 2)).toEqual({
      kind: "set-filter",
      field: "value",
      min: null,
      max: 2,
    });
  });

  it("rejects bad filters before any dispatch", () => {
    expect(isRejection(filterAction("", 0, 1))).toBe(true);
    expect(isRejection(filterAction("value", Number.NaN, 1))).toBe(true);
    expect(isRejection(filterAction("value", 0, Number.POSITIVE_INFINITY))).toBe(true);
    expect(isRejection(filterAction("value", 5, 1))).toBe(true);
  });

  it("validates lod strides", () => {
    expect(lodAction(2)).toEqual({ kind: "set-lod", stride: 2 });
    expect(isRejection(lodAction(0))).toBe(true);
    expect(isRejection(lodAction(1.5))).toBe(true);
  });

  it("validates collapse ranges", () => {
    expect(collapseAction("timeline", 2, 5)).toEqual({
      kind: "collapse",
      branch: "timeline",
      start: 2,
      end: 5,
    });
    expect(isRejection(collapseAction("timeline", 5, 2))).toBe(true);
    expect(isRejection(collapseAction("timeline", -1, 2))).toBe(true);
    expect(isRejection(collapseAction("", 0, 1))).toBe(true);
  });
});
