/** Single-page workspace shell: wires the HTTP client to the screens.
 *
 * State lives in memory; every mutation round-trips through the API and
 * re-renders from the server's answer, so the page never shows anything
 * the archive does not hold.
 */

import { PlatformClient, ApiError } from "./client.js";
import type { Element as IeElement } from "./client.js";
import {
  renderAdvisories,
  renderArticulationForm,
  renderElementCard,
  renderProvenance,
  renderSessionScreen,
} from "./views.js";

export interface AppOptions {
  baseUrl: string;
  token?: string;
  root: HTMLElement;
}

export class WorkspaceApp {
  readonly client: PlatformClient;
  private readonly root: HTMLElement;
  private sessionId: string | null = null;

  constructor(options: AppOptions) {
    this.client = new PlatformClient(options.baseUrl, options.token);
    this.root = options.root;
  }

  async openSession(worker: string, taskType: string, instance: string): Promise<void> {
    const session = await this.client.openSession(worker, taskType, instance);
    this.sessionId = session.session_id;
    await this.refresh();
  }

  async advance(toActivity: string): Promise<void> {
    if (!this.sessionId) throw new Error("no open session");
    await this.client.advance(this.sessionId, toActivity);
    await this.refresh();
  }

  async articulate(input: {
    kind: string;
    content: string;
    title: string;
    supports: string[];
  }): Promise<string> {
    if (!this.sessionId) throw new Error("no open session");
    const result = await this.client.articulate(this.sessionId, {
      kind: input.kind,
      content: input.content,
      surrogate: { title: input.title },
      supports: input.supports,
    });
    this.root.querySelector(".workbench")?.append(renderElementCard(result));
    return result.element.id;
  }

  async showProvenance(elementId: string): Promise<void> {
    const closure = await this.client.provenance(elementId);
    const byId = new Map<string, IeElement>();
    for (const id of closure.elements) {
      byId.set(id, await this.client.element(id));
    }
    this.replace(".provenance", renderProvenance(closure, byId));
  }

  /** Re-fetch everything for the open session and redraw the page. */
  async refresh(): Promise<void> {
    if (!this.sessionId) return;
    const id = this.sessionId;
    const [session, context, next, warnings, related] = await Promise.all([
      this.client.session(id),
      this.client.context(id),
      this.client.nextActivities(id),
      this.client.completenessWarnings(id),
      this.relatedOrEmpty(id),
    ]);
    this.root.replaceChildren();
    this.root.append(renderSessionScreen(session, context, next));
    this.root.append(renderAdvisories(warnings, related));
    const workbench = document.createElement("div");
    workbench.className = "workbench";
    workbench.append(
      renderArticulationForm(context, (input) => {
        void this.articulate(input);
      }),
    );
    this.root.append(workbench);
  }

  private async relatedOrEmpty(id: string) {
    try {
      return await this.client.relatedElements(id);
    } catch (error) {
      // before the first advance there is no activity to relate against
      if (error instanceof ApiError && error.code === "NoCurrentActivity") {
        return [];
      }
      throw error;
    }
  }

  private replace(selector: string, node: HTMLElement): void {
    this.root.querySelector(selector)?.remove();
    this.root.append(node);
  }
}
