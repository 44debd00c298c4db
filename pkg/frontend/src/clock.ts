/** Injectable monotonic clock and timer, so the session engine is testable
 * with synthetic time and measurable with real time. */

export type TimerHandle = number;

export interface Clock {
  /** Monotonic milliseconds; never affected by wall-clock changes. */
  now(): number;
  setTimeout(callback: () => void, delayMs: number): TimerHandle;
  clearTimeout(handle: TimerHandle): void;
}

/** performance.now-based clock (browser and Node). */
export const realClock: Clock = {
  now: () => performance.now(),
  setTimeout: (callback, delayMs) =>
    setTimeout(callback, delayMs) as unknown as TimerHandle,
  clearTimeout: (handle) => clearTimeout(handle as unknown as NodeJS.Timeout),
};

/** Deterministic clock for unit tests: time moves only via advance(). */
export class FakeClock implements Clock {
  private t = 0;
  private nextHandle = 1;
  private timers = new Map<TimerHandle, { due: number; callback: () => void }>();

  now(): number {
    return this.t;
  }

  setTimeout(callback: () => void, delayMs: number): TimerHandle {
    const handle = this.nextHandle++;
    this.timers.set(handle, { due: this.t + delayMs, callback });
    return handle;
  }

  clearTimeout(handle: TimerHandle): void {
    this.timers.delete(handle);
  }

  /** Advance time, firing due timers in order. */
  advance(ms: number): void {
    const target = this.t + ms;
    for (;;) {
      let nextHandle: TimerHandle | null = null;
      let nextDue = Infinity;
      for (const [handle, timer] of this.timers) {
        if (timer.due <= target && timer.due < nextDue) {
          nextDue = timer.due;
          nextHandle = handle;
        }
      }
      if (nextHandle === null) break;
      const timer = this.timers.get(nextHandle)!;
      this.timers.delete(nextHandle);
      this.t = timer.due;
      timer.callback();
    }
    this.t = target;
  }
}
