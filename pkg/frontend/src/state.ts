// Explorer state and its URL-query-string form.  Every view is shareable:
// copying the address bar reproduces the exact configuration.

export const LEVELS = ["grade", "domain", "domain_grade", "term", "term_grade"] as const;
export type Level = (typeof LEVELS)[number];

export const LEVEL_LABELS: Record<Level, string> = {
  grade: "Grade",
  domain: "Domain",
  domain_grade: "Domain + Grade",
  term: "Term",
  term_grade: "Term + Grade",
};

export interface ExplorerState {
  dataset: string | null;
  level: Level;
  cycle: number | null;
  contribMin: number; // fraction in [0, 1]
  freqMin: number;    // fraction in [0, 1]
  dimA: number;
  dimB: number;
}

export const DEFAULT_STATE: ExplorerState = {
  dataset: null,
  level: "grade",
  cycle: null,
  contribMin: 0,
  freqMin: 0,
  dimA: 1,
  dimB: 2,
};

function clampFraction(value: number): number {
  if (!Number.isFinite(value)) return 0;
  return Math.min(1, Math.max(0, value));
}

export function stateToQuery(state: ExplorerState): string {
  const params = new URLSearchParams();
  if (state.dataset) params.set("dataset", state.dataset);
  if (state.level !== DEFAULT_STATE.level) params.set("level", state.level);
  if (state.cycle !== null) params.set("cycle", String(state.cycle));
  if (state.contribMin > 0) params.set("contrib_min", String(state.contribMin));
  if (state.freqMin > 0) params.set("freq_min", String(state.freqMin));
  if (state.dimA !== 1 || state.dimB !== 2) {
    params.set("dims", `${state.dimA},${state.dimB}`);
  }
  return params.toString();
}

export function stateFromQuery(query: string): ExplorerState {
  const params = new URLSearchParams(query);
  const state: ExplorerState = { ...DEFAULT_STATE };
  const dataset = params.get("dataset");
  if (dataset) state.dataset = dataset;
  const level = params.get("level");
  if (level && (LEVELS as readonly string[]).includes(level)) {
    state.level = level as Level;
  }
  const cycle = params.get("cycle");
  if (cycle !== null && cycle !== "" && Number.isInteger(Number(cycle)) && Number(cycle) >= 0) {
    state.cycle = Number(cycle);
  }
  const contrib = params.get("contrib_min");
  if (contrib !== null) state.contribMin = clampFraction(Number(contrib));
  const freq = params.get("freq_min");
  if (freq !== null) state.freqMin = clampFraction(Number(freq));
  const dims = params.get("dims");
  if (dims) {
    const parts = dims.split(",").map(Number);
    if (
      parts.length === 2 &&
      parts.every((d) => Number.isInteger(d) && d >= 1) &&
      parts[0] !== parts[1]
    ) {
      [state.dimA, state.dimB] = parts as [number, number];
    }
  }
  return state;
}

export function analysisBody(state: ExplorerState): {
  level: string;
  cycle: number | null;
  contrib_min: number;
  freq_min: number;
  dims: [number, number];
} {
  return {
    level: state.level,
    cycle: state.cycle,
    contrib_min: state.contribMin,
    freq_min: state.freqMin,
    dims: [state.dimA, state.dimB],
  };
}
