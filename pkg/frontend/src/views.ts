/** Pure DOM builders for each workspace screen.
 *
 * Every function takes already-fetched data and returns a detached
 * element, so the screens are unit-testable without a server.
 */

import type {
  ArticulationResult,
  Context,
  ProvenanceClosure,
  Recommendation,
  Element as IeElement,
  Session,
  SearchHit,
  Transition,
  VerificationReport,
} from "./client.js";

function el(
  tag: string,
  className: string,
  text?: string,
): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function historyRow(transition: Transition): HTMLElement {
  const row = el("li", "transition");
  row.append(
    el(
      "span",
      "transition-step",
      `${transition.from_activity ?? "(start)"} → ${transition.to_activity}`,
    ),
  );
  if (transition.deviation) {
    row.append(el("span", "badge badge-deviation", "deviation"));
  }
  if (transition.note) row.append(el("span", "transition-note", transition.note));
  return row;
}

/** Session screen: status line, current activity, transition history with
 * deviation badges, and the ranked next-step suggestions. */
export function renderSessionScreen(
  session: Session,
  context: Context,
  nextSteps: Recommendation[],
): HTMLElement {
  const root = el("section", "session-screen");
  root.append(
    el(
      "h2",
      "session-title",
      `${session.task_type} / ${session.task_instance}`,
    ),
    el("p", "session-status", `${session.status} — ${session.worker}`),
    el(
      "p",
      "current-activity",
      context.current_activity ?? "no activity yet",
    ),
  );

  const history = el("ul", "history");
  for (const transition of session.history) history.append(historyRow(transition));
  root.append(history);

  const steps = el("ol", "next-steps");
  for (const rec of nextSteps) {
    const item = el("li", "next-step", rec.subject);
    item.title = rec.rationale;
    if (rec.rationale.includes("deviation")) {
      item.append(el("span", "badge badge-deviation", "deviation"));
    }
    steps.append(item);
  }
  root.append(steps);
  return root;
}

/** Articulation form; ``onSubmit`` receives the filled-in fields. */
export function renderArticulationForm(
  context: Context,
  onSubmit: (input: {
    kind: string;
    content: string;
    title: string;
    supports: string[];
  }) => void,
): HTMLElement {
  const form = document.createElement("form");
  form.className = "articulate-form";

  const kind = document.createElement("select");
  kind.name = "kind";
  for (const value of [
    "Observation",
    "Finding",
    "Analysis",
    "Hypothesis",
    "Decision",
    "Plan",
  ]) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = value;
    kind.append(option);
  }

  const title = document.createElement("input");
  title.name = "title";
  title.placeholder = "surrogate title";

  const content = document.createElement("textarea");
  content.name = "content";
  content.placeholder = `content for ${context.current_activity ?? "?"}`;

  const supports = document.createElement("input");
  supports.name = "supports";
  supports.placeholder = "supporting element ids, comma separated";

  const submit = document.createElement("button");
  submit.type = "submit";
  submit.textContent = "Articulate";

  form.append(kind, title, content, supports, submit);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    onSubmit({
      kind: kind.value,
      content: content.value,
      title: title.value,
      supports: supports.value.split(",").map((s) => s.trim()).filter(Boolean),
    });
  });
  return form;
}

/** Card for one element plus the links created alongside it. */
export function renderElementCard(result: ArticulationResult): HTMLElement {
  const card = el("article", "element-card");
  card.dataset.elementId = result.element.id;
  card.append(
    el("h3", "element-title", result.element.surrogate.title),
    el("p", "element-kind", result.element.kind),
    el("p", "element-content", result.element.content),
  );
  const links = el("ul", "element-links");
  for (const link of result.links) {
    links.append(
      el("li", "element-link", `${link.link_type}: ${link.source} → ${link.target}`),
    );
  }
  card.append(links);
  return card;
}

/** Lineage view: the root element and everything it builds on. */
export function renderProvenance(
  closure: ProvenanceClosure,
  byId: Map<string, IeElement>,
): HTMLElement {
  const root = el("section", "provenance");
  root.append(el("h2", "provenance-root", closure.root));
  const list = el("ul", "provenance-elements");
  for (const id of closure.elements) {
    const element = byId.get(id);
    list.append(
      el("li", "provenance-element", element ? element.surrogate.title : id),
    );
  }
  const links = el("ul", "provenance-links");
  for (const link of closure.links) {
    links.append(
      el("li", "provenance-link", `${link.source} ─${link.link_type}→ ${link.target}`),
    );
  }
  root.append(list, links);
  return root;
}

/** Argument board: grounding verdict, supports with evidence, objections. */
export function renderArgumentBoard(report: VerificationReport): HTMLElement {
  const board = el("section", "argument-board");
  board.append(
    el(
      "p",
      report.grounded ? "verdict verdict-grounded" : "verdict verdict-ungrounded",
      report.grounded ? "grounded" : "not grounded",
    ),
  );
  const supports = el("ul", "argument-supports");
  for (const support of report.supports) {
    const item = el("li", "argument-support", support.text);
    const evidence = el("ul", "argument-evidence");
    for (const id of support.evidence) evidence.append(el("li", "evidence", id));
    item.append(evidence);
    supports.append(item);
  }
  const objections = el("ul", "argument-objections");
  for (const objection of report.objections) {
    objections.append(el("li", "argument-objection", objection.text));
  }
  board.append(supports, objections);
  return board;
}

/** Search results, ranked. */
export function renderSearchResults(
  hits: SearchHit[],
  byId: Map<string, IeElement>,
): HTMLElement {
  const list = el("ol", "search-results");
  for (const hit of hits) {
    const element = byId.get(hit.id);
    const item = el(
      "li",
      "search-hit",
      element ? element.surrogate.title : hit.id,
    );
    item.dataset.score = hit.score.toFixed(4);
    list.append(item);
  }
  return list;
}

/** Completeness warnings and related-element hints as one advisory panel. */
export function renderAdvisories(
  warnings: Recommendation[],
  related: Recommendation[],
): HTMLElement {
  const panel = el("aside", "advisories");
  const warningList = el("ul", "completeness-warnings");
  for (const warning of warnings) {
    warningList.append(el("li", "warning", `${warning.subject}: ${warning.rationale}`));
  }
  const relatedList = el("ul", "related-elements");
  for (const rec of related) {
    relatedList.append(el("li", "related", rec.subject));
  }
  panel.append(warningList, relatedList);
  return panel;
}
