/** Timed session state machine.
 *
 * Phases run Setup -> [Fixation -> Stimulus -> AwaitResponse? -> Gap?]* -> Done.
 * A stimulus stays visible for exactly display_ms regardless of when the
 * subject answers; answering never shortens the presentation. Input is
 * accepted from stimulus onset until response_window_ms after offset, at
 * most once per observable. A window that closes without input records the
 * observable as missing and flags the session incomplete.
 */

import type { Clock, TimerHandle } from './clock.js';
import {
  type ExperimentConfigJson,
  type Judgment,
  JUDGMENT_TO_OUTCOME,
  type Observable,
  type Outcome,
  type Protocol,
} from './types.js';

export type Phase =
  | { kind: 'setup' }
  | { kind: 'fixation' }
  | { kind: 'stimulus'; observable: Observable }
  | { kind: 'await-response'; observable: Observable }
  | { kind: 'gap' }
  | { kind: 'done' };

export interface CapturedResponse {
  observable: Observable;
  outcome: Outcome;
  latencyMs: number;
}

export interface SessionState {
  subjectId: string;
  experimentId: string;
  protocol: Protocol;
  phase: Phase;
  responses: CapturedResponse[];
  /** observables whose response window closed without input */
  missing: Observable[];
  incomplete: boolean;
  startedAt?: string;
}

export interface SessionEvents {
  onPhase?(phase: Phase, atMs: number): void;
  onStimulusShown?(observable: Observable, atMs: number): void;
  onStimulusHidden?(observable: Observable, atMs: number): void;
  onDone?(state: SessionState): void;
}

export const DEFAULT_FIXATION_MS = 500;

export class SessionEngine {
  readonly state: SessionState;
  private readonly sequence: Observable[];
  private readonly clock: Clock;
  private readonly events: SessionEvents;
  private readonly config: ExperimentConfigJson;
  private readonly fixationMs: number;
  private position = 0;
  private stimulusOnset = 0;
  private answered = new Set<Observable>();
  private timer: TimerHandle | null = null;

  constructor(
    config: ExperimentConfigJson,
    subjectId: string,
    protocol: Protocol,
    clock: Clock,
    events: SessionEvents = {},
    options: { fixationMs?: number } = {},
  ) {
    this.config = config;
    this.clock = clock;
    this.events = events;
    this.fixationMs = options.fixationMs ?? DEFAULT_FIXATION_MS;
    this.sequence = protocol === 'A_ONLY' ? ['A'] : ['B', 'A'];
    this.state = {
      subjectId,
      experimentId: config.experiment_id,
      protocol,
      phase: { kind: 'setup' },
      responses: [],
      missing: [],
      incomplete: false,
    };
  }

  start(): void {
    if (this.state.phase.kind !== 'setup') {
      throw new Error('session already started');
    }
    this.state.startedAt = new Date().toISOString();
    this.setPhase({ kind: 'fixation' });
    this.schedule(this.fixationMs, () => this.showStimulus());
  }

  /** Capture a judgment; returns true when it was accepted. */
  respond(judgment: Judgment): boolean {
    const phase = this.state.phase;
    if (phase.kind !== 'stimulus' && phase.kind !== 'await-response') {
      return false;
    }
    const observable = phase.observable;
    if (this.answered.has(observable)) {
      return false;
    }
    this.answered.add(observable);
    this.state.responses.push({
      observable,
      outcome: JUDGMENT_TO_OUTCOME[judgment],
      latencyMs: Math.round(this.clock.now() - this.stimulusOnset),
    });
    if (phase.kind === 'await-response') {
      // the stimulus is already gone; move on immediately
      this.clearTimer();
      this.advance();
    }
    return true;
  }

  private get currentObservable(): Observable {
    const observable = this.sequence[this.position];
    if (observable === undefined) {
      throw new Error('no stimulus at the current position');
    }
    return observable;
  }

  private showStimulus(): void {
    const observable = this.currentObservable;
    this.stimulusOnset = this.clock.now();
    this.setPhase({ kind: 'stimulus', observable });
    this.events.onStimulusShown?.(observable, this.stimulusOnset);
    this.schedule(this.config.display_ms, () => this.hideStimulus());
  }

  private hideStimulus(): void {
    const observable = this.currentObservable;
    this.events.onStimulusHidden?.(observable, this.clock.now());
    if (this.answered.has(observable)) {
      this.advance();
      return;
    }
    this.setPhase({ kind: 'await-response', observable });
    this.schedule(this.config.response_window_ms, () => {
      this.state.missing.push(observable);
      this.state.incomplete = true;
      this.advance();
    });
  }

  private advance(): void {
    this.position += 1;
    if (this.position >= this.sequence.length) {
      this.setPhase({ kind: 'done' });
      this.events.onDone?.(this.state);
      return;
    }
    this.setPhase({ kind: 'gap' });
    this.schedule(this.config.inter_test_gap_ms, () => this.showStimulus());
  }

  private setPhase(phase: Phase): void {
    this.state.phase = phase;
    this.events.onPhase?.(phase, this.clock.now());
  }

  private schedule(delayMs: number, callback: () => void): void {
    this.clearTimer();
    this.timer = this.clock.setTimeout(callback, delayMs);
  }

  private clearTimer(): void {
    if (this.timer !== null) {
      this.clock.clearTimeout(this.timer);
      this.timer = null;
    }
  }
}

/** Protocol for the n-th session under a config's assignment policy. */
export function assignProtocol(
  assignment: ExperimentConfigJson['protocol_assignment'],
  index: number,
): Protocol {
  if (assignment.mode === 'fixed') {
    return assignment.protocol ?? 'A_ONLY';
  }
  if (assignment.mode === 'alternating') {
    return index % 2 === 0 ? 'A_ONLY' : 'B_THEN_A';
  }
  // small xorshift keyed by seed and index: stable without shared state
  let x = ((assignment.seed ?? 0) ^ (index + 0x9e3779b9)) >>> 0;
  x ^= x << 13;
  x >>>= 0;
  x ^= x >> 17;
  x ^= x << 5;
  x >>>= 0;
  return x % 2 === 0 ? 'A_ONLY' : 'B_THEN_A';
}
