/** Boots the real backend once for the whole test run.
 *
 * The contract suite talks to a live server so the UI is exercised
 * against actual service behavior, not recorded fixtures.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";

const PORT = 8765;
export const BASE_URL = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | undefined;

async function waitForReady(url: string, attempts = 100): Promise<void> {
  for (let i = 0; i < attempts; i += 1) {
    try {
      const response = await fetch(`${url}/task-types`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  throw new Error("backend did not become ready");
}

export async function setup(): Promise<void> {
  const backendRoot = resolve(
    dirname(fileURLToPath(import.meta.url)), "..", "..",
  );
  const dataDir = mkdtempSync(join(tmpdir(), "workspace-ui-"));
  server = spawn(
    "python3",
    ["-m", "kwsp.cli", "--data", dataDir, "serve", "--addr", `127.0.0.1:${PORT}`],
    { cwd: backendRoot, stdio: ["ignore", "inherit", "inherit"] },
  );
  await waitForReady(BASE_URL);
  const definition = readFileSync(
    join(backendRoot, "fixtures", "patient-care.json"),
    "utf-8",
  );
  const response = await fetch(`${BASE_URL}/task-types`, {
    method: "PUT",
    headers: { "Content-Type": "application/json" },
    body: definition,
  });
  if (!response.ok) {
    throw new Error(`definition upload failed: ${await response.text()}`);
  }
  process.env.WORKSPACE_API_URL = BASE_URL;
}

export async function teardown(): Promise<void> {
  server?.kill("SIGTERM");
}
