// Pure view-model over a service response.  No analysis math happens here:
// the scatter shows exactly the coordinates the service returned, mapped
// into pixels, so the displayed point set always equals the service's
// class list one for one.

import type { AnalysisResponse, BiplotViewJson, ClassPoint, GroupPoint } from "./types.js";

export interface PlacedPoint {
  label: string;
  px: number;
  py: number;
  kind: "group" | "class";
  source: GroupPoint | ClassPoint;
}

export interface RenderModel {
  width: number;
  height: number;
  points: PlacedPoint[];
  originPx: { x: number; y: number };
  axisLabels: [string, string];
  lossPct: number;
  oneDimensional: boolean;
  droppedByFilter: string[];
}

const MARGIN = 48;

export function buildRenderModel(
  view: BiplotViewJson,
  width = 720,
  height = 520,
): RenderModel {
  const xs = [0, ...view.group_points.map((p) => p.x), ...view.class_points.map((p) => p.x)];
  const ys = [0, ...view.group_points.map((p) => p.y), ...view.class_points.map((p) => p.y)];
  let xmin = Math.min(...xs);
  let xmax = Math.max(...xs);
  let ymin = Math.min(...ys);
  let ymax = Math.max(...ys);
  const xpad = 0.08 * (xmax - xmin) || 1;
  const ypad = 0.08 * (ymax - ymin) || 1;
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;

  const sx = (v: number) => MARGIN + ((v - xmin) / (xmax - xmin)) * (width - 2 * MARGIN);
  const sy = (v: number) => MARGIN + ((ymax - v) / (ymax - ymin)) * (height - 2 * MARGIN);

  const points: PlacedPoint[] = [
    ...view.class_points.map<PlacedPoint>((p) => ({
      label: p.label,
      px: sx(p.x),
      py: sy(p.y),
      kind: "class",
      source: p,
    })),
    ...view.group_points.map<PlacedPoint>((p) => ({
      label: p.label,
      px: sx(p.x),
      py: sy(p.y),
      kind: "group",
      source: p,
    })),
  ];

  return {
    width,
    height,
    points,
    originPx: { x: sx(0), y: sy(0) },
    axisLabels: view.axis_labels,
    lossPct: view.loss_of_information_pct,
    oneDimensional: view.one_dimensional,
    droppedByFilter: view.dropped_by_filter,
  };
}

export function displayedClassLabels(model: RenderModel): string[] {
  return model.points.filter((p) => p.kind === "class").map((p) => p.label);
}

export function displayedGroupLabels(model: RenderModel): string[] {
  return model.points.filter((p) => p.kind === "group").map((p) => p.label);
}

// Inertia-share summary ("Table 2" style) pulled straight from the response.
export function shareSummary(response: AnalysisResponse): { dim: number; pct: number }[] {
  return response.ca.inertia_shares_pct.map((pct, i) => ({ dim: i + 1, pct }));
}
