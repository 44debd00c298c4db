/** Collector HTTP client (the runner's only link to the backend). */

import { CONFIG_DEFAULTS, type ExperimentConfigJson, type TrialRecordJson } from './types.js';

export interface SubmitResult {
  status: number;
  ok: boolean;
  /** findings (422), error text (409/500), or the canonical record echo (201) */
  body: unknown;
}

export async function fetchExperimentConfig(
  baseUrl: string,
  experimentId: string,
): Promise<ExperimentConfigJson> {
  const response = await fetch(
    `${baseUrl}/api/v1/experiments/${encodeURIComponent(experimentId)}/config`,
  );
  if (!response.ok) {
    throw new Error(`config fetch failed: HTTP ${response.status}`);
  }
  const doc = (await response.json()) as Partial<ExperimentConfigJson>;
  return {
    experiment_id: doc.experiment_id ?? experimentId,
    stimuli: doc.stimuli ?? {},
    display_ms: doc.display_ms ?? CONFIG_DEFAULTS.display_ms,
    inter_test_gap_ms: doc.inter_test_gap_ms ?? CONFIG_DEFAULTS.inter_test_gap_ms,
    response_window_ms: doc.response_window_ms ?? CONFIG_DEFAULTS.response_window_ms,
    protocol_assignment: doc.protocol_assignment ?? { mode: 'alternating' },
  };
}

export async function submitSession(
  baseUrl: string,
  record: TrialRecordJson,
  options: { override?: boolean } = {},
): Promise<SubmitResult> {
  const query = options.override ? '?override=true' : '';
  const response = await fetch(`${baseUrl}/api/v1/sessions${query}`, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(record),
  });
  let body: unknown = null;
  try {
    body = await response.json();
  } catch {
    body = null;
  }
  return { status: response.status, ok: response.status === 201, body };
}
