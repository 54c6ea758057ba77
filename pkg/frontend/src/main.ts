// Explorer wiring: controls -> state -> (debounced) service call -> render.
// The UI is a pure view over service responses; all analysis math stays on
// the server.

import { ApiClient, ApiError } from "./api.js";
import { buildRenderModel } from "./model.js";
import { renderFreqTable } from "./freqTable.js";
import { renderScatter } from "./scatter.js";
import {
  DEFAULT_STATE,
  LEVEL_LABELS,
  LEVELS,
  stateFromQuery,
  stateToQuery,
  type ExplorerState,
} from "./state.js";
import type { AnalysisResponse } from "./types.js";

const DEBOUNCE_MS = 150;

const api = new ApiClient();
let state: ExplorerState = stateFromQuery(location.search);
let lastResponse: AnalysisResponse | null = null;
let highlighted: string | null = null;
let selected: string | null = null;
let debounceTimer: number | undefined;

const $ = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
};

const datasetSelect = $<HTMLSelectElement>("dataset");
const levelSelect = $<HTMLSelectElement>("level");
const cycleInput = $<HTMLInputElement>("cycle");
const contribSlider = $<HTMLInputElement>("contrib");
const freqSlider = $<HTMLInputElement>("freq");
const contribReadout = $<HTMLElement>("contrib-value");
const freqReadout = $<HTMLElement>("freq-value");
const dimASelect = $<HTMLSelectElement>("dim-a");
const dimBSelect = $<HTMLSelectElement>("dim-b");
const banner = $<HTMLElement>("banner");
const scatterBox = $<HTMLElement>("scatter");
const tableBox = $<HTMLElement>("freq-table");
const sharesBox = $<HTMLElement>("shares");

function showBanner(message: string | null): void {
  banner.textContent = message ?? "";
  banner.hidden = message === null;
}

function syncControls(): void {
  levelSelect.replaceChildren(
    ...LEVELS.map((level) => {
      const option = document.createElement("option");
      option.value = level;
      option.textContent = LEVEL_LABELS[level];
      option.selected = level === state.level;
      return option;
    }),
  );
  cycleInput.value = state.cycle === null ? "" : String(state.cycle);
  contribSlider.value = String(state.contribMin * 100);
  freqSlider.value = String(state.freqMin * 100);
  contribReadout.textContent = `${(state.contribMin * 100).toFixed(2)}%`;
  freqReadout.textContent = `${(state.freqMin * 100).toFixed(2)}%`;
  dimASelect.value = String(state.dimA);
  dimBSelect.value = String(state.dimB);
}

function syncUrl(): void {
  const query = stateToQuery(state);
  history.replaceState(null, "", query ? `?${query}` : location.pathname);
}

function syncDimOptions(rank: number): void {
  for (const [select, current] of [
    [dimASelect, state.dimA],
    [dimBSelect, state.dimB],
  ] as const) {
    select.replaceChildren(
      ...Array.from({ length: Math.max(rank, 2) }, (_, i) => {
        const option = document.createElement("option");
        option.value = String(i + 1);
        option.textContent = `Dim ${i + 1}`;
        option.selected = i + 1 === current;
        return option;
      }),
    );
  }
}

function renderShares(response: AnalysisResponse): void {
  const rows = response.ca.inertia_shares_pct
    .map((pct, i) => `<tr><td>Dim ${i + 1}</td><td>${pct.toFixed(2)}%</td></tr>`)
    .join("");
  sharesBox.innerHTML =
    `<table class="shares"><thead><tr><th>Dimension</th><th>Inertia</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`;
}

function renderAll(): void {
  if (!lastResponse) return;
  const model = buildRenderModel(lastResponse.view);
  renderScatter(
    scatterBox,
    model,
    {
      onHover(label) {
        highlighted = label;
        renderAll();
      },
      onSelect(label) {
        selected = label;
        renderAll();
      },
    },
    selected ?? highlighted,
  );
  renderFreqTable(
    tableBox,
    lastResponse.view,
    {
      onHover(label) {
        highlighted = label;
        renderAll();
      },
    },
    selected ?? highlighted,
  );
  renderShares(lastResponse);
}

async function refresh(): Promise<void> {
  if (!state.dataset) {
    showBanner("Upload a dataset via the API, then pick it here.");
    return;
  }
  try {
    const response = await api.analyze(state);
    if (response === null) return; // superseded by a newer request
    lastResponse = response;
    showBanner(null);
    syncDimOptions(response.ca.rank);
    renderAll();
  } catch (err) {
    if (err instanceof ApiError) {
      showBanner(`${err.problem.code}: ${err.problem.message}`);
    } else {
      showBanner(`service unreachable: ${String(err)}`);
    }
  }
}

function update(patch: Partial<ExplorerState>, debounce = false): void {
  state = { ...state, ...patch };
  syncUrl();
  syncControls();
  if (debounce) {
    window.clearTimeout(debounceTimer);
    debounceTimer = window.setTimeout(() => void refresh(), DEBOUNCE_MS);
  } else {
    void refresh();
  }
}

async function init(): Promise<void> {
  syncControls();
  try {
    const datasets = await api.listDatasets();
    datasetSelect.replaceChildren(
      ...datasets.map((meta) => {
        const option = document.createElement("option");
        option.value = meta.id;
        option.textContent = `${meta.name} (${meta.n_records} records)`;
        option.selected = meta.id === state.dataset;
        return option;
      }),
    );
    if (!state.dataset && datasets.length > 0) {
      state = { ...state, dataset: datasets[0].id };
      syncUrl();
    }
  } catch (err) {
    showBanner(`service unreachable: ${String(err)}`);
    return;
  }
  await refresh();
}

datasetSelect.addEventListener("change", () =>
  update({ dataset: datasetSelect.value || null }),
);
levelSelect.addEventListener("change", () =>
  update({ level: levelSelect.value as ExplorerState["level"] }),
);
cycleInput.addEventListener("change", () => {
  const raw = cycleInput.value.trim();
  update({ cycle: raw === "" ? null : Math.max(0, Math.trunc(Number(raw))) });
});
contribSlider.addEventListener("input", () =>
  update({ contribMin: Number(contribSlider.value) / 100 }, true),
);
freqSlider.addEventListener("input", () =>
  update({ freqMin: Number(freqSlider.value) / 100 }, true),
);
dimASelect.addEventListener("change", () => {
  const dimA = Number(dimASelect.value);
  update({ dimA, dimB: dimA === state.dimB ? state.dimA : state.dimB });
});
dimBSelect.addEventListener("change", () => {
  const dimB = Number(dimBSelect.value);
  update({ dimB, dimA: dimB === state.dimA ? state.dimB : state.dimA });
});
window.addEventListener("popstate", () => {
  state = stateFromQuery(location.search);
  syncControls();
  void refresh();
});

void init();

export { DEFAULT_STATE }; // keeps this file a module for isolated builds
