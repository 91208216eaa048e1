import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    globals: true,
    environment: "happy-dom",
    environmentOptions: {
      // the contract suite fetches the live backend; give the simulated
      // page the same origin so those requests are not CORS-blocked
      happyDOM: { url: "http://127.0.0.1:8765" },
    },
    globalSetup: ["tests/serverSetup.ts"],
    testTimeout: 20000,
    hookTimeout: 30000,
  },
});
