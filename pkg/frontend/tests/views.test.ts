import { describe, expect, it, vi } from "vitest";

import type {
  ArticulationResult,
  Context,
  Recommendation,
  Session,
  VerificationReport,
} from "../src/client.js";
import {
  renderArgumentBoard,
  renderArticulationForm,
  renderElementCard,
  renderProvenance,
  renderSessionScreen,
} from "../src/views.js";

const SESSION: Session = {
  session_id: "01ARZ3NDEKTSV4RRFFQ69G5FAV",
  worker: "dr_a",
  task_type: "patient-care",
  definition_version: 1,
  task_instance: "P1",
  current_activity: "examination",
  status: "Open",
  history: [
    {
      from_activity: null,
      to_activity: "examination",
      deviation: false,
      at: "2026-01-01T00:00:00.000Z",
      note: null,
    },
    {
      from_activity: "examination",
      to_activity: "treatment_planning",
      deviation: true,
      at: "2026-01-01T00:01:00.000Z",
      note: "urgent case",
    },
  ],
};

const CONTEXT: Context = {
  task_type: "patient-care",
  task_instance: "P1",
  current_activity: "examination",
  corresponding_ie_type_nodes: ["results_of_examination"],
  recent_element_ids: [],
};

const NEXT: Recommendation[] = [
  {
    kind: "NextActivity",
    subject: "determination_of_possible_diseases",
    rationale: "nominal successor",
    score: 1.0,
  },
];

describe("session screen", () => {
  it("shows the current activity and the nominal next step first", () => {
    const screen = renderSessionScreen(SESSION, CONTEXT, NEXT);
    expect(screen.querySelector(".current-activity")?.textContent).toBe(
      "examination",
    );
    const steps = [...screen.querySelectorAll(".next-step")].map(
      (n) => n.textContent,
    );
    expect(steps[0]).toBe("determination_of_possible_diseases");
  });

  it("renders a deviation badge only on deviant transitions", () => {
    const screen = renderSessionScreen(SESSION, CONTEXT, NEXT);
    const rows = [...screen.querySelectorAll(".transition")];
    expect(rows).toHaveLength(2);
    expect(rows[0]?.querySelector(".badge-deviation")).toBeNull();
    expect(rows[1]?.querySelector(".badge-deviation")?.textContent).toBe(
      "deviation",
    );
  });

  it("flags deviant next-step suggestions", () => {
    const deviant: Recommendation = {
      kind: "NextActivity",
      subject: "treatment_planning",
      rationale: "observed deviation in past sessions",
      score: 0.2,
    };
    const screen = renderSessionScreen(SESSION, CONTEXT, [...NEXT, deviant]);
    const steps = [...screen.querySelectorAll(".next-step")];
    expect(steps[1]?.querySelector(".badge-deviation")).not.toBeNull();
  });
});

describe("articulation form", () => {
  it("submits the entered fields and parses the supports list", () => {
    const onSubmit = vi.fn();
    const form = renderArticulationForm(CONTEXT, onSubmit) as HTMLFormElement;
    document.body.append(form);
    (form.querySelector("textarea") as HTMLTextAreaElement).value =
      "high temperature, headache";
    (form.querySelector("input[name=title]") as HTMLInputElement).value =
      "exam findings";
    (form.querySelector("input[name=supports]") as HTMLInputElement).value =
      " a1 , a2 ,";
    form.dispatchEvent(new Event("submit", { cancelable: true }));
    expect(onSubmit).toHaveBeenCalledWith({
      kind: "Observation",
      content: "high temperature, headache",
      title: "exam findings",
      supports: ["a1", "a2"],
    });
    form.remove();
  });
});

describe("element card", () => {
  it("lists every link created with the element", () => {
    const result: ArticulationResult = {
      element: {
        id: "E1",
        kind: "Observation",
        task_type: "patient-care",
        task_instance: "P1",
        activity_node: "examination",
        ie_type_node: "results_of_examination",
        content: "high temperature",
        surrogate: { title: "exam findings", terms: [] },
        provenance: {
          author: "dr_a",
          session: "S1",
          source_document: null,
          situational_note: "",
        },
        created_at: "2026-01-01T00:00:00.000Z",
      },
      links: [
        {
          id: "L1",
          link_type: "CategorizedAs",
          source: "E1",
          target: "def:patient-care:1:examination",
          created_at: "2026-01-01T00:00:00.000Z",
          note: null,
        },
        {
          id: "L2",
          link_type: "CategorizedAs",
          source: "E1",
          target: "def:patient-care:1:results_of_examination",
          created_at: "2026-01-01T00:00:00.000Z",
          note: null,
        },
      ],
    };
    const card = renderElementCard(result);
    expect(card.dataset.elementId).toBe("E1");
    expect(card.querySelectorAll(".element-link")).toHaveLength(2);
  });
});

describe("argument board", () => {
  it("shows the grounding verdict with supports and objections", () => {
    const report: VerificationReport = {
      position: "POS1",
      grounded: true,
      supports: [{ argument: "A1", text: "symptoms match", evidence: ["E1"] }],
      objections: [{ argument: "A2", text: "no lab confirmation" }],
    };
    const board = renderArgumentBoard(report);
    expect(board.querySelector(".verdict")?.textContent).toBe("grounded");
    expect(board.querySelectorAll(".argument-support")).toHaveLength(1);
    expect(board.querySelectorAll(".evidence")).toHaveLength(1);
    expect(board.querySelectorAll(".argument-objection")).toHaveLength(1);
  });
});

describe("provenance view", () => {
  it("renders titles when elements are resolvable, ids otherwise", () => {
    const view = renderProvenance(
      {
        root: "E2",
        elements: ["E2", "E1"],
        links: [
          {
            id: "L1",
            link_type: "ReferenceSupport",
            source: "E1",
            target: "E2",
            created_at: "2026-01-01T00:00:00.000Z",
            note: null,
          },
        ],
      },
      new Map(),
    );
    const items = [...view.querySelectorAll(".provenance-element")].map(
      (n) => n.textContent,
    );
    expect(items).toEqual(["E2", "E1"]);
    expect(view.querySelectorAll(".provenance-link")).toHaveLength(1);
  });
});
