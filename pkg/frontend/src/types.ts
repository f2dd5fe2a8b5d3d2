/** Wire types for the annotation service, as the server emits them. */

export interface Meta {
  sample_rate: number;
  sample_count: number;
  channel_labels: string[];
  eog_index: number | null;
  trigger_index: number | null;
  trial_bounds: [number, number][];
  suggested_channels: string[];
}

export interface Trace {
  label: string;
  min: number[];
  max: number[];
}

export interface WindowResponse {
  start: number;
  length: number;
  bins: number;
  channels: Trace[];
}

/** Marking state as served by GET /msf; intervals are half-open sample pairs. */
export interface MsfState {
  length: number;
  sample_rate: number;
  intervals: [number, number][];
  revision: number;
}

export type SaveResult =
  | { kind: "saved"; state: MsfState }
  | { kind: "conflict"; revision: number; detail: string }
  | { kind: "rejected"; detail: string };
