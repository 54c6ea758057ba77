// Shapes of the /v1 JSON API (see docs/*.schema.json in the repository root).

export interface DatasetMeta {
  id: string;
  name: string;
  created_at: string;
  sha256: string;
  n_records: number;
  n_rejects: number;
  groups: { label: string; patients: number }[];
}

export interface GroupPoint {
  label: string;
  x: number;
  y: number;
}

export interface ClassPoint {
  label: string;
  x: number;
  y: number;
  contribution_dim1: number;
  contribution_dim2: number;
  avg_frequency: number;
}

export interface FrequencyRow {
  label: string;
  values_pct: number[];
  average_pct: number;
}

export interface BiplotViewJson {
  dims: [number, number];
  one_dimensional: boolean;
  axis_labels: [string, string];
  loss_of_information_pct: number;
  group_points: GroupPoint[];
  class_points: ClassPoint[];
  dropped_by_filter: string[];
  frequency_table: { groups: string[]; rows: FrequencyRow[] };
}

export interface CAJson {
  singular_values: number[];
  inertia_shares_pct: number[];
  treatment_coords: number[][];
  class_coords: number[][];
  contributions: number[][];
  dropped_classes: string[];
  rank: number;
  total_inertia: number;
  groups: string[];
  class_labels: string[];
  stacked_labels: string[];
  avg_frequency: number[];
}

export interface AnalysisResponse {
  dataset_id: string;
  request: {
    level: string;
    cycle: number | null;
    contrib_min: number;
    freq_min: number;
    dims: number[];
    show_complements: boolean;
  };
  ca: CAJson;
  view: BiplotViewJson;
  frequency_table: {
    classes: string[];
    groups: string[];
    values_pct: number[][];
    average_pct: number[];
  };
}

export interface ProblemJson {
  code: string;
  message: string;
  details: Record<string, unknown>;
}
