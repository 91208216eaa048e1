/** Typed HTTP client for the knowledge-work platform API. */

export interface Surrogate {
  title: string;
  terms: string[];
}

export interface Provenance {
  author: string;
  session: string | null;
  source_document: string | null;
  situational_note: string;
}

export interface Element {
  id: string;
  kind: string;
  task_type: string;
  task_instance: string;
  activity_node: string | null;
  ie_type_node: string | null;
  content: string;
  surrogate: Surrogate;
  provenance: Provenance;
  created_at: string;
}

export interface Link {
  id: string;
  link_type: string;
  source: string;
  target: string;
  created_at: string;
  note: string | null;
}

export interface TaskTypeSummary {
  id: string;
  name: string;
  version: number;
}

export interface Transition {
  from_activity: string | null;
  to_activity: string;
  deviation: boolean;
  at: string;
  note: string | null;
}

export interface Session {
  session_id: string;
  worker: string;
  task_type: string;
  definition_version: number;
  task_instance: string;
  current_activity: string | null;
  status: string;
  history: Transition[];
}

export interface Context {
  task_type: string;
  task_instance: string;
  current_activity: string | null;
  corresponding_ie_type_nodes: string[];
  recent_element_ids: string[];
}

export interface ArticulationResult {
  element: Element;
  links: Link[];
}

export interface Recommendation {
  kind: string;
  subject: string;
  rationale: string;
  score: number | null;
}

export interface SearchHit {
  id: string;
  score: number;
  rank: number;
}

export interface ProvenanceClosure {
  root: string;
  elements: string[];
  links: Link[];
}

export interface ArgumentNode {
  id: string;
  node_kind: string;
  text: string;
  author: string;
  created_at: string;
  task_instance: string | null;
}

export interface VerificationReport {
  position: string;
  grounded: boolean;
  supports: { argument: string; text: string; evidence: string[] }[];
  objections: { argument: string; text: string }[];
}

export interface ArticulationInput {
  kind: string;
  content: string;
  surrogate: { title: string; terms?: string[] };
  supports?: string[];
  satisfies?: string[];
  ie_type_node?: string;
  note?: string;
}

export interface ApiErrorBody {
  code: string;
  message: string;
}

/** Raised for any non-2xx response; carries the service's error code. */
export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, body: ApiErrorBody) {
    super(`${body.code}: ${body.message}`);
    this.code = body.code;
    this.status = status;
  }
}

export interface SearchFilter {
  task_type?: string;
  task_instance?: string;
  kind?: string;
  activity_node?: string;
  ie_type_node?: string;
}

export class PlatformClient {
  constructor(
    private readonly baseUrl: string,
    private readonly token?: string,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["X-KWSP-Token"] = this.token;
    const response = await fetch(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, payload as ApiErrorBody);
    }
    return payload as T;
  }

  taskTypes(): Promise<TaskTypeSummary[]> {
    return this.request("GET", "/task-types");
  }

  registerTaskType(definition: unknown): Promise<TaskTypeSummary> {
    return this.request("PUT", "/task-types", definition);
  }

  taskType(id: string): Promise<Record<string, unknown>> {
    return this.request("GET", `/task-types/${id}`);
  }

  openSession(
    worker: string,
    taskType: string,
    taskInstance: string,
  ): Promise<Session> {
    return this.request("POST", "/sessions", {
      worker,
      task_type: taskType,
      task_instance: taskInstance,
    });
  }

  session(id: string): Promise<Session> {
    return this.request("GET", `/sessions/${id}`);
  }

  advance(id: string, toActivity: string, note?: string): Promise<Transition> {
    return this.request("POST", `/sessions/${id}/advance`, {
      to_activity: toActivity,
      note,
    });
  }

  context(id: string): Promise<Context> {
    return this.request("GET", `/sessions/${id}/context`);
  }

  complete(id: string): Promise<Session> {
    return this.request("POST", `/sessions/${id}/complete`);
  }

  articulate(id: string, input: ArticulationInput): Promise<ArticulationResult> {
    return this.request("POST", `/sessions/${id}/elements`, input);
  }

  nextActivities(id: string): Promise<Recommendation[]> {
    return this.request("GET", `/sessions/${id}/recommendations/next`);
  }

  relatedElements(id: string): Promise<Recommendation[]> {
    return this.request("GET", `/sessions/${id}/recommendations/related`);
  }

  completenessWarnings(id: string): Promise<Recommendation[]> {
    return this.request("GET", `/sessions/${id}/recommendations/completeness`);
  }

  search(terms: string[], filter: SearchFilter = {}): Promise<SearchHit[]> {
    const params = new URLSearchParams({ terms: terms.join(",") });
    for (const [key, value] of Object.entries(filter)) {
      if (value) params.set(key, value);
    }
    return this.request("GET", `/search?${params.toString()}`);
  }

  element(id: string): Promise<Element> {
    return this.request("GET", `/elements/${id}`);
  }

  provenance(id: string): Promise<ProvenanceClosure> {
    return this.request("GET", `/elements/${id}/provenance`);
  }

  supports(id: string): Promise<string[]> {
    return this.request("GET", `/elements/${id}/supports`);
  }

  raiseIssue(session: string, text: string): Promise<ArgumentNode> {
    return this.request("POST", "/issues", { session, text });
  }

  takePosition(
    session: string,
    issue: string,
    text: string,
  ): Promise<ArgumentNode> {
    return this.request("POST", "/positions", { session, issue, text });
  }

  argue(
    session: string,
    position: string,
    stance: "supports" | "objects",
    text: string,
    evidence: string[] = [],
  ): Promise<ArgumentNode> {
    return this.request("POST", "/arguments", {
      session,
      position,
      stance,
      text,
      evidence,
    });
  }

  verify(position: string): Promise<VerificationReport> {
    return this.request("GET", `/positions/${position}/verify`);
  }

  conclude(position: string, session: string): Promise<ArticulationResult> {
    return this.request("POST", `/positions/${position}/conclude`, { session });
  }
}
