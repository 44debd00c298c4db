import { defineConfig } from 'vitest/config';

// real-time harness: 20 scripted sessions at the configured 3 s / 2 s
// durations against a live collector, so the timeout is generous
export default defineConfig({
  test: {
    include: ['tests/**/*.acceptance.test.ts'],
    testTimeout: 300_000,
    hookTimeout: 60_000,
  },
});
