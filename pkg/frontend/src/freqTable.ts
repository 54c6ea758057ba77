// Companion frequency table, hover-linked to the scatter.  Biplot readings
// should always be double-checked against these percentages, so the table is
// rendered beside the plot at all times.

import type { BiplotViewJson } from "./types.js";

export interface FreqTableCallbacks {
  onHover(label: string | null): void;
}

export function renderFreqTable(
  container: HTMLElement,
  view: BiplotViewJson,
  callbacks: FreqTableCallbacks,
  highlighted: string | null,
): void {
  container.replaceChildren();
  const table = document.createElement("table");
  table.className = "freq";

  const head = table.createTHead().insertRow();
  for (const text of ["AE class", ...view.frequency_table.groups, "Average"]) {
    const th = document.createElement("th");
    th.textContent = text;
    head.append(th);
  }

  const body = table.createTBody();
  for (const row of view.frequency_table.rows) {
    const tr = body.insertRow();
    tr.dataset.label = row.label;
    if (row.label === highlighted) tr.classList.add("highlight");
    const name = tr.insertCell();
    name.textContent = row.label;
    for (const value of row.values_pct) {
      tr.insertCell().textContent = value.toFixed(2);
    }
    const avg = tr.insertCell();
    avg.textContent = row.average_pct.toFixed(2);
    avg.classList.add("avg");
    tr.addEventListener("mouseenter", () => callbacks.onHover(row.label));
    tr.addEventListener("mouseleave", () => callbacks.onHover(null));
  }

  container.append(table);

  if (view.dropped_by_filter.length > 0) {
    const note = document.createElement("p");
    note.className = "dropped-note";
    note.textContent =
      `${view.dropped_by_filter.length} class(es) below thresholds: ` +
      view.dropped_by_filter.join(", ");
    container.append(note);
  }
}
