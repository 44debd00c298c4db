/** Build and locally validate qontext/trial/v1 records from session state. */

import type { SessionState } from './session.js';
import { TRIAL_SCHEMA, type TrialRecordJson } from './types.js';

const PROTOCOL_SHAPE: Record<string, string[]> = {
  A_ONLY: ['A'],
  B_THEN_A: ['B', 'A'],
};

/** One canonical record for a completed session. Throws on incomplete ones. */
export function buildTrialRecord(state: SessionState): TrialRecordJson {
  if (state.incomplete || state.phase.kind !== 'done') {
    throw new Error('session is incomplete and cannot be exported');
  }
  return {
    schema: TRIAL_SCHEMA,
    subject_id: state.subjectId,
    experiment_id: state.experimentId,
    protocol: state.protocol,
    responses: state.responses.map((response) => ({
      observable: response.observable,
      outcome: response.outcome,
      latency_ms: response.latencyMs,
    })),
    ...(state.startedAt !== undefined ? { presented_at: state.startedAt } : {}),
  };
}

/** Single JSONL line for offline export. */
export function recordToLine(record: TrialRecordJson): string {
  return JSON.stringify(record) + '\n';
}

/** Local mirror of the collector's schema checks; empty when valid. */
export function validateRecord(record: TrialRecordJson): string[] {
  const findings: string[] = [];
  if (record.schema !== TRIAL_SCHEMA) {
    findings.push(`schema must be ${TRIAL_SCHEMA}`);
  }
  if (!record.subject_id) {
    findings.push('subject_id must be nonempty');
  }
  if (!record.experiment_id) {
    findings.push('experiment_id must be nonempty');
  }
  const shape = PROTOCOL_SHAPE[record.protocol];
  if (shape === undefined) {
    findings.push(`unknown protocol ${record.protocol}`);
  } else {
    const got = record.responses.map((response) => response.observable);
    if (got.length !== shape.length || got.some((o, i) => o !== shape[i])) {
      findings.push(
        `protocol ${record.protocol} requires responses [${shape.join(', ')}], got [${got.join(', ')}]`,
      );
    }
  }
  for (const response of record.responses) {
    if (response.outcome !== 'plus' && response.outcome !== 'minus') {
      findings.push(`outcome must be plus or minus, got ${response.outcome}`);
    }
    if (
      response.latency_ms !== undefined &&
      (!Number.isInteger(response.latency_ms) || response.latency_ms < 0)
    ) {
      findings.push('latency_ms must be a nonnegative integer');
    }
  }
  return findings;
}
