/** Real-time acceptance harness: 20 scripted sessions against a live
 * collector. Asserts stimulus visible-duration 3000 +/- 50 ms, inter-test
 * gap 2000 +/- 50 ms, and that every exported record is accepted (201).
 *
 * Run with: npm run test:acceptance (takes a few minutes by design).
 */

import { spawn, type ChildProcess } from 'node:child_process';
import { mkdtempSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join, resolve } from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { fetchExperimentConfig, submitSession } from '../src/api.js';
import { realClock } from '../src/clock.js';
import { buildTrialRecord, validateRecord } from '../src/record.js';
import { SessionEngine, type SessionState } from '../src/session.js';
import type { ExperimentConfigJson, Judgment, Protocol } from '../src/types.js';

const REPO_ROOT = resolve(__dirname, '..', '..');
const TOLERANCE_MS = 50;
const SESSIONS = 20;

let collector: ChildProcess;
let baseUrl = '';

function startCollector(): Promise<string> {
  const store = mkdtempSync(join(tmpdir(), 'qontext-store-'));
  collector = spawn(
    'python3',
    [
      '-m',
      'qontext.cli',
      'serve',
      '--addr',
      '127.0.0.1:0',
      '--store',
      store,
      '--experiment-config',
      join(REPO_ROOT, 'fixtures', 'experiments_config.json'),
      '--allow-origin',
      '*',
    ],
    { cwd: REPO_ROOT, stdio: ['ignore', 'pipe', 'inherit'] },
  );
  return new Promise((resolvePromise, rejectPromise) => {
    const timer = setTimeout(() => rejectPromise(new Error('collector did not start')), 20_000);
    collector.stdout!.on('data', (chunk: Buffer) => {
      const match = /listening on http:\/\/([^\s]+)/.exec(chunk.toString());
      if (match) {
        clearTimeout(timer);
        resolvePromise(`http://${match[1]}`);
      }
    });
    collector.on('exit', (code) => rejectPromise(new Error(`collector exited early: ${code}`)));
  });
}

interface Timings {
  durations: number[]; // visible time per stimulus
  gaps: number[]; // offset of one stimulus to onset of the next
  state: SessionState;
}

/** Run one real-time session with a scripted responder. */
function runScriptedSession(
  config: ExperimentConfigJson,
  subjectId: string,
  protocol: Protocol,
  judgments: Judgment[],
  responseDelayMs: number,
): Promise<Timings> {
  return new Promise((resolvePromise) => {
    const shownAt: number[] = [];
    const hiddenAt: number[] = [];
    let answered = 0;
    const engine: SessionEngine = new SessionEngine(
      config,
      subjectId,
      protocol,
      realClock,
      {
        onStimulusShown: (_observable, at) => {
          shownAt.push(at);
          const judgment = judgments[answered];
          answered += 1;
          // respond mid-display, like the timed group administration
          setTimeout(() => engine.respond(judgment ?? 'equal'), responseDelayMs);
        },
        onStimulusHidden: (_observable, at) => {
          hiddenAt.push(at);
        },
        onDone: (state) => {
          const durations = shownAt.map((t, i) => (hiddenAt[i] ?? NaN) - t);
          const gaps = shownAt.slice(1).map((t, i) => t - (hiddenAt[i] ?? NaN));
          resolvePromise({ durations, gaps, state });
        },
      },
      { fixationMs: 120 },
    );
    engine.start();
  });
}

beforeAll(async () => {
  baseUrl = await startCollector();
});

afterAll(() => {
  collector?.kill();
});

describe('timing harness', () => {
  it(
    `runs ${SESSIONS} scripted sessions within +/-${TOLERANCE_MS} ms and submits them`,
    async () => {
      const config = await fetchExperimentConfig(baseUrl, 'demo');
      expect(config.display_ms).toBe(3000);
      expect(config.inter_test_gap_ms).toBe(2000);

      const allDurations: number[] = [];
      const allGaps: number[] = [];
      for (let index = 0; index < SESSIONS; index += 1) {
        const protocol: Protocol = index % 2 === 0 ? 'A_ONLY' : 'B_THEN_A';
        const judgments: Judgment[] =
          index % 3 === 0 ? ['equal', 'equal'] : ['not-equal', 'equal'];
        const timings = await runScriptedSession(
          config,
          `harness-${String(index).padStart(2, '0')}`,
          protocol,
          judgments,
          300 + (index % 5) * 180,
        );
        expect(timings.state.incomplete).toBe(false);
        allDurations.push(...timings.durations);
        allGaps.push(...timings.gaps);

        const record = buildTrialRecord(timings.state);
        expect(validateRecord(record)).toEqual([]);
        const result = await submitSession(baseUrl, record);
        expect(result.status).toBe(201);
      }

      expect(allDurations).toHaveLength(30); // 10 single + 10 double stimulus
      expect(allGaps).toHaveLength(10);
      for (const duration of allDurations) {
        expect(Math.abs(duration - config.display_ms)).toBeLessThanOrEqual(TOLERANCE_MS);
      }
      for (const gap of allGaps) {
        expect(Math.abs(gap - config.inter_test_gap_ms)).toBeLessThanOrEqual(TOLERANCE_MS);
      }
    },
    300_000,
  );
});
