// UI parity against golden service responses for the published-table
// fixture: the explorer must display exactly the point set and axis labels
// the service returned, and raising thresholds must never add points.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { buildRenderModel, displayedClassLabels, displayedGroupLabels, shareSummary } from "../src/model.js";
import type { AnalysisResponse } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

function fixture(name: string): AnalysisResponse {
  return JSON.parse(readFileSync(join(here, "fixtures", `${name}.json`), "utf8"));
}

const zero = fixture("analysis_zero_thresholds");
const raised = fixture("analysis_raised_thresholds");

describe("explorer parity with the service response", () => {
  it("displays exactly the service's class point set", () => {
    const model = buildRenderModel(zero.view);
    expect(displayedClassLabels(model)).toEqual(zero.view.class_points.map((p) => p.label));
  });

  it("displays exactly the service's group point set", () => {
    const model = buildRenderModel(zero.view);
    expect(displayedGroupLabels(model)).toEqual(zero.view.group_points.map((p) => p.label));
  });

  it("axis labels carry the service's inertia shares verbatim", () => {
    const model = buildRenderModel(zero.view);
    expect(model.axisLabels).toEqual(zero.view.axis_labels);
    expect(model.axisLabels[0]).toBe("Dim 1 (87.77%)");
    expect(model.axisLabels[1]).toBe("Dim 2 (10.46%)");
  });

  it("loss figure comes straight from the service", () => {
    const model = buildRenderModel(zero.view);
    expect(model.lossPct).toBe(zero.view.loss_of_information_pct);
    expect(model.lossPct).toBeCloseTo(1.77, 2);
  });

  it("share summary lists every dimension", () => {
    const rows = shareSummary(zero);
    expect(rows.map((r) => r.dim)).toEqual([1, 2, 3]);
    expect(rows[0].pct).toBeCloseTo(87.77, 2);
  });

  it("point coordinates are the service's, not recomputed", () => {
    // pixel placement is affine in the service coordinates: recover the
    // scale from two points and check every other point lands on it
    const model = buildRenderModel(zero.view);
    const classPoints = model.points.filter((p) => p.kind === "class");
    const src = zero.view.class_points;
    const [a, b] = [classPoints[0], classPoints[1]];
    const scaleX = (b.px - a.px) / (src[1].x - src[0].x);
    for (let i = 2; i < classPoints.length; i++) {
      const predicted = a.px + (src[i].x - src[0].x) * scaleX;
      expect(classPoints[i].px).toBeCloseTo(predicted, 8);
    }
  });
});

describe("slider monotonicity", () => {
  it("raising thresholds never adds a point", () => {
    const before = new Set(zero.view.class_points.map((p) => p.label));
    const after = raised.view.class_points.map((p) => p.label);
    expect(after.every((label) => before.has(label))).toBe(true);
    expect(after.length).toBeLessThanOrEqual(before.size);
  });

  it("hidden classes are reported, not silently lost", () => {
    const shown = new Set(raised.view.class_points.map((p) => p.label));
    const dropped = raised.view.dropped_by_filter;
    const all = zero.view.class_points.map((p) => p.label);
    for (const label of all) {
      expect(shown.has(label) || dropped.includes(label)).toBe(true);
    }
  });

  it("frequency table slice follows the displayed set", () => {
    const shown = raised.view.class_points.map((p) => p.label);
    const rows = raised.view.frequency_table.rows.map((r) => r.label);
    expect(rows).toEqual(shown);
  });
});
