/** Wire types shared with the collector (qontext/trial/v1). */

export const TRIAL_SCHEMA = 'qontext/trial/v1';

export type Outcome = 'plus' | 'minus';
export type Observable = 'A' | 'B';
export type Protocol = 'A_ONLY' | 'B_THEN_A';

/** The subject's judgment of a figure pair. */
export type Judgment = 'equal' | 'not-equal';

export interface ResponseJson {
  observable: Observable;
  outcome: Outcome;
  latency_ms?: number;
}

export interface TrialRecordJson {
  schema: typeof TRIAL_SCHEMA;
  subject_id: string;
  experiment_id: string;
  protocol: Protocol;
  responses: ResponseJson[];
  presented_at?: string;
}

export interface StimulusJson {
  image: string;
  prompt: string;
}

export interface ProtocolAssignmentJson {
  mode: 'fixed' | 'alternating' | 'random';
  protocol?: Protocol;
  seed?: number;
}

export interface ExperimentConfigJson {
  experiment_id: string;
  stimuli: Partial<Record<Observable, StimulusJson>>;
  display_ms: number;
  inter_test_gap_ms: number;
  response_window_ms: number;
  protocol_assignment: ProtocolAssignmentJson;
}

export const CONFIG_DEFAULTS = {
  display_ms: 3000,
  inter_test_gap_ms: 2000,
  response_window_ms: 10000,
} as const;

/**
 * The single source of the plus/"equal" convention: a subject judging the
 * figures equal records a plus outcome.
 */
export const JUDGMENT_TO_OUTCOME: Record<Judgment, Outcome> = {
  equal: 'plus',
  'not-equal': 'minus',
};
