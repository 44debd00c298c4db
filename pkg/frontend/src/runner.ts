/** Browser glue: binds the session engine to the DOM.
 *
 * Keyboard-first input (F = equal, J = not equal) with on-screen buttons as
 * fallback. One active session per tab; submission keeps a single request
 * in flight. All timing runs on the monotonic clock in clock.ts.
 */

import { fetchExperimentConfig, submitSession } from './api.js';
import { realClock } from './clock.js';
import { buildTrialRecord, recordToLine, validateRecord } from './record.js';
import { assignProtocol, SessionEngine, type Phase } from './session.js';
import {
  CONFIG_DEFAULTS,
  type ExperimentConfigJson,
  type Judgment,
  type TrialRecordJson,
} from './types.js';

const KEY_TO_JUDGMENT: Record<string, Judgment> = {
  KeyF: 'equal',
  KeyJ: 'not-equal',
};

function element<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

function offlineConfig(experimentId: string): ExperimentConfigJson {
  return {
    experiment_id: experimentId,
    stimuli: {
      B: { image: 'assets/pair-b.svg', prompt: 'Are the two figures equal?' },
      A: { image: 'assets/pair-a.svg', prompt: 'Are the two figures equal?' },
    },
    ...CONFIG_DEFAULTS,
    protocol_assignment: { mode: 'alternating' },
  };
}

function download(line: string, subjectId: string): void {
  const blob = new Blob([line], { type: 'application/jsonl' });
  const anchor = document.createElement('a');
  anchor.href = URL.createObjectURL(blob);
  anchor.download = `session-${subjectId}.jsonl`;
  anchor.click();
  URL.revokeObjectURL(anchor.href);
}

export function initRunner(): void {
  const stage = element<HTMLDivElement>('stage');
  const status = element<HTMLDivElement>('status');
  const controls = element<HTMLDivElement>('controls');
  const form = element<HTMLFormElement>('setup-form');
  let engine: SessionEngine | null = null;
  let submitting = false;

  function renderPhase(phase: Phase, config: ExperimentConfigJson): void {
    controls.hidden = phase.kind !== 'stimulus' && phase.kind !== 'await-response';
    switch (phase.kind) {
      case 'fixation':
        stage.innerHTML = '<div class="fixation">+</div>';
        break;
      case 'stimulus': {
        const stimulus = config.stimuli[phase.observable];
        stage.innerHTML = `
          <figure class="stimulus">
            <img src="${stimulus?.image ?? ''}" alt="figure pair ${phase.observable}">
            <figcaption>${stimulus?.prompt ?? 'Are the two figures equal?'}</figcaption>
          </figure>`;
        break;
      }
      case 'await-response':
        stage.innerHTML = '<div class="prompt">Answer now: equal (F) or not equal (J)</div>';
        break;
      case 'gap':
        stage.innerHTML = '';
        break;
      case 'done':
        stage.innerHTML = '<div class="prompt">Session complete. Thank you.</div>';
        break;
      default:
        stage.innerHTML = '';
    }
  }

  async function finish(record: TrialRecordJson, collectorUrl: string): Promise<void> {
    const findings = validateRecord(record);
    if (findings.length > 0) {
      status.textContent = `internal error, record invalid: ${findings.join('; ')}`;
      return;
    }
    if (collectorUrl === '') {
      download(recordToLine(record), record.subject_id);
      status.textContent = 'offline mode: session downloaded as JSONL';
      return;
    }
    if (submitting) return;
    submitting = true;
    try {
      const result = await submitSession(collectorUrl, record);
      if (result.ok) {
        status.textContent = 'session stored by the collector';
      } else {
        status.textContent = `collector rejected the session (HTTP ${result.status}): ${JSON.stringify(result.body)}`;
      }
    } catch (error) {
      status.textContent = `submission failed: ${String(error)}`;
    } finally {
      submitting = false;
    }
  }

  form.addEventListener('submit', (event) => {
    event.preventDefault();
    void (async () => {
      const collectorUrl = element<HTMLInputElement>('collector-url').value.trim();
      const experimentId = element<HTMLInputElement>('experiment-id').value.trim();
      const subjectId = element<HTMLInputElement>('subject-id').value.trim();
      if (subjectId === '' || experimentId === '') {
        status.textContent = 'subject and experiment ids are required';
        return;
      }
      let config: ExperimentConfigJson;
      try {
        config =
          collectorUrl === ''
            ? offlineConfig(experimentId)
            : await fetchExperimentConfig(collectorUrl, experimentId);
      } catch (error) {
        status.textContent = String(error);
        return;
      }
      const counterKey = `qontext-session-counter-${experimentId}`;
      const index = Number(localStorage.getItem(counterKey) ?? '0');
      localStorage.setItem(counterKey, String(index + 1));
      const protocol = assignProtocol(config.protocol_assignment, index);
      status.textContent = `running ${protocol} session for ${subjectId}`;
      form.hidden = true;
      engine = new SessionEngine(config, subjectId, protocol, realClock, {
        onPhase: (phase) => renderPhase(phase, config),
        onDone: (state) => {
          form.hidden = false;
          if (state.incomplete) {
            status.textContent =
              'no response within the window: session incomplete, not submitted';
            return;
          }
          void finish(buildTrialRecord(state), collectorUrl);
        },
      });
      engine.start();
    })();
  });

  document.addEventListener('keydown', (event) => {
    const judgment = KEY_TO_JUDGMENT[event.code];
    if (judgment !== undefined) engine?.respond(judgment);
  });
  element<HTMLButtonElement>('btn-equal').addEventListener('click', () =>
    engine?.respond('equal'),
  );
  element<HTMLButtonElement>('btn-not-equal').addEventListener('click', () =>
    engine?.respond('not-equal'),
  );
}

initRunner();
