// SVG scatter for one render model.  Hover events bubble up through the
// callbacks so the frequency table can highlight in sync.

import type { RenderModel } from "./model.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface ScatterCallbacks {
  onHover(label: string | null): void;
  onSelect(label: string | null): void;
}

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  return node;
}

export function renderScatter(
  container: HTMLElement,
  model: RenderModel,
  callbacks: ScatterCallbacks,
  selected: string | null,
): void {
  container.replaceChildren();
  const svg = el("svg", {
    viewBox: `0 0 ${model.width} ${model.height}`,
    width: "100%",
    role: "img",
  });

  // origin crosshair
  svg.append(
    el("line", {
      x1: "24", y1: String(model.originPx.y),
      x2: String(model.width - 24), y2: String(model.originPx.y),
      class: "crosshair",
    }),
  );
  if (!model.oneDimensional) {
    svg.append(
      el("line", {
        x1: String(model.originPx.x), y1: "24",
        x2: String(model.originPx.x), y2: String(model.height - 24),
        class: "crosshair",
      }),
    );
  }

  for (const point of model.points) {
    const group = el("g", {
      class: `pt ${point.kind}${selected === point.label ? " selected" : ""}`,
    });
    group.dataset.label = point.label;
    const marker =
      point.kind === "group"
        ? el("rect", {
            x: String(point.px - 4), y: String(point.py - 4),
            width: "8", height: "8",
          })
        : el("circle", { cx: String(point.px), cy: String(point.py), r: "4" });
    const label = el("text", {
      x: String(point.px + 6),
      y: String(point.py - 5),
    });
    label.textContent = point.label;
    group.append(marker, label);
    group.addEventListener("mouseenter", () => callbacks.onHover(point.label));
    group.addEventListener("mouseleave", () => callbacks.onHover(null));
    group.addEventListener("click", () =>
      callbacks.onSelect(selected === point.label ? null : point.label),
    );
    svg.append(group);
  }

  // axis annotations
  const xLabel = el("text", {
    x: String(model.width / 2),
    y: String(model.height - 8),
    class: "axis-label",
    "text-anchor": "middle",
  });
  xLabel.textContent = model.axisLabels[0];
  const yLabel = el("text", {
    x: "14",
    y: String(model.height / 2),
    class: "axis-label",
    "text-anchor": "middle",
    transform: `rotate(-90 14 ${model.height / 2})`,
  });
  yLabel.textContent = model.axisLabels[1];
  const loss = el("text", {
    x: String(model.width - 24),
    y: "18",
    class: "loss-label",
    "text-anchor": "end",
  });
  loss.textContent = `Loss of information: ${model.lossPct.toFixed(2)}%`;
  svg.append(xLabel, yLabel, loss);

  if (model.oneDimensional) {
    const note = el("text", { x: "24", y: "18", class: "rank-note" });
    note.textContent = "rank < 2: one-dimensional layout";
    svg.append(note);
  }

  container.append(svg);
}
