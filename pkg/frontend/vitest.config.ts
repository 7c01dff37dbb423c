import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // the integration suite generates a dataset and boots the server
    testTimeout: 60_000,
    hookTimeout: 120_000,
  },
});
