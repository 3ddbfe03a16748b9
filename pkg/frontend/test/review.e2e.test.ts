// End-to-end flow against the stubbed service: every verdict must
// round-trip through the API, and an item ends fully judged only after
// seven accepted judgments.

import { beforeEach, describe, expect, it, vi } from "vitest";
import { ApiClient } from "../src/api.js";
import { ReviewApp } from "../src/main.js";
import { DIMENSIONS, type Dimension } from "../src/types.js";
import { MemoryDraftStore, StubService, fixtureItem, settle } from "./helpers.js";

function mount(): HTMLElement {
  document.body.innerHTML = '<div id="app"></div>';
  const root = document.getElementById("app");
  if (root === null) throw new Error("no mount point");
  return root;
}

async function loginAs(root: HTMLElement, app: ReviewApp, smeId: string): Promise<void> {
  app.start();
  const input = root.querySelector<HTMLInputElement>("input.login-sme");
  expect(input).not.toBeNull();
  input!.value = smeId;
  root.querySelector("form.login")!.dispatchEvent(
    new Event("submit", { bubbles: true, cancelable: true }),
  );
  await settle();
}

function row(root: HTMLElement, dimension: Dimension): HTMLElement {
  const el = root.querySelector<HTMLElement>(`.row[data-dimension="${dimension}"]`);
  expect(el, dimension).not.toBeNull();
  return el!;
}

async function submitVerdict(
  root: HTMLElement,
  dimension: Dimension,
  verdict: "agree" | "disagree",
  rationale?: string,
): Promise<void> {
  row(root, dimension).querySelector<HTMLButtonElement>(`button.${verdict}`)!.click();
  await settle();
  if (rationale !== undefined) {
    const area = row(root, dimension).querySelector<HTMLTextAreaElement>(
      "textarea.rationale-input",
    )!;
    area.value = rationale;
    area.dispatchEvent(new Event("input", { bubbles: true }));
  }
  row(root, dimension).querySelector<HTMLButtonElement>("button.submit")!.click();
  await settle();
}

describe("review flow end to end", () => {
  let service: StubService;
  let root: HTMLElement;
  let app: ReviewApp;

  beforeEach(() => {
    vi.unstubAllGlobals();
    service = new StubService([fixtureItem()]);
    service.install();
    root = mount();
    app = new ReviewApp(root, new ApiClient(""), new MemoryDraftStore());
  });

  it("renders the fixture item after login", async () => {
    await loginAs(root, app, "sme1");
    expect(root.querySelector(".stem")!.textContent).toContain("range(5)");
    // code panel with line numbers
    const lines = root.querySelectorAll(".code-lines li");
    expect(lines.length).toBe(4);
    // four options, the designated answer marked
    expect(root.querySelectorAll(".option").length).toBe(4);
    const correct = root.querySelector(".option.correct")!;
    expect(correct.getAttribute("data-label")).toBe("A");
    expect(correct.querySelector(".correct-mark")).not.toBeNull();
    expect(correct.querySelector(".option-feedback")!.textContent).toContain("0+1+2+3+4");
    // seven validator rows with classification and rationale
    expect(root.querySelectorAll(".row").length).toBe(7);
    for (const dimension of DIMENSIONS) {
      const section = row(root, dimension);
      expect(section.querySelector(".classification")!.textContent).toMatch(/yes|good/);
      expect(section.querySelector(".finding-rationale")!.textContent).toContain("checks out");
    }
    expect(root.querySelector(".progress")!.textContent).toBe("0 of 1 judged");
    expect(root.querySelector(".item-status")!.getAttribute("data-status")).toBe("pending");
  });

  it("submits seven verdicts through the API and ends fully judged", async () => {
    await loginAs(root, app, "sme1");

    for (const dimension of DIMENSIONS) {
      if (dimension === "distractor_quality") {
        await submitVerdict(root, dimension, "disagree", "Option C reads as plausible as B.");
      } else {
        await submitVerdict(root, dimension, "agree");
      }
    }

    const posts = service.posts();
    expect(posts.length).toBe(7);
    expect(new Set(posts.map((p) => p.path))).toEqual(
      new Set(["/items/q-fix-0001/judgments"]),
    );
    expect(posts.map((p) => (p.body as { dimension: string }).dimension)).toEqual(
      [...DIMENSIONS],
    );
    for (const post of posts) {
      const body = post.body as {
        sme_id: string;
        dimension: string;
        verdict: string;
        rationale: string | null;
      };
      expect(body.sme_id).toBe("sme1");
      if (body.dimension === "distractor_quality") {
        expect(body.verdict).toBe("disagree");
        expect(body.rationale).toBe("Option C reads as plausible as B.");
      } else {
        expect(body.verdict).toBe("agree");
        expect(body.rationale).toBeNull();
      }
    }

    // server state and rendered state both fully judged
    expect(service.items.get("q-fix-0001")!.status).toBe("fully_judged");
    expect(root.querySelector(".item-status")!.getAttribute("data-status")).toBe(
      "fully_judged",
    );
    expect(root.querySelector(".progress")!.textContent).toBe("1 of 1 judged");
    for (const dimension of DIMENSIONS) {
      expect(row(root, dimension).classList.contains("is-locked")).toBe(true);
      expect(row(root, dimension).querySelector(".locked-verdict")).not.toBeNull();
    }
    // the disagree rationale is echoed in its locked row
    expect(
      row(root, "distractor_quality").querySelector(".locked-rationale")!.textContent,
    ).toContain("plausible as B");
  });

  it("blocks an empty-rationale disagree before any request", async () => {
    await loginAs(root, app, "sme1");
    const before = service.posts().length;

    row(root, "stem_clarity").querySelector<HTMLButtonElement>("button.disagree")!.click();
    await settle();
    row(root, "stem_clarity").querySelector<HTMLButtonElement>("button.submit")!.click();
    await settle();

    expect(service.posts().length).toBe(before);
    const error = row(root, "stem_clarity").querySelector(".row-error");
    expect(error).not.toBeNull();
    expect(error!.textContent).toContain("rationale");
    expect(row(root, "stem_clarity").classList.contains("is-locked")).toBe(false);
    // typing a rationale and resubmitting goes through
    const area = row(root, "stem_clarity").querySelector<HTMLTextAreaElement>(
      "textarea.rationale-input",
    )!;
    area.value = "The stem never says what n is.";
    area.dispatchEvent(new Event("input", { bubbles: true }));
    row(root, "stem_clarity").querySelector<HTMLButtonElement>("button.submit")!.click();
    await settle();
    expect(service.posts().length).toBe(before + 1);
    expect(row(root, "stem_clarity").classList.contains("is-locked")).toBe(true);
  });

  it("requires a verdict before submitting", async () => {
    await loginAs(root, app, "sme1");
    row(root, "code_validity").querySelector<HTMLButtonElement>("button.submit")!.click();
    await settle();
    expect(service.posts().length).toBe(0);
    expect(row(root, "code_validity").querySelector(".row-error")!.textContent).toContain(
      "agree or disagree",
    );
  });

  it("keeps the draft and shows the error when the server rejects", async () => {
    await loginAs(root, app, "sme1");
    service.failNext = { status: 500, error: "StorageFailure", message: "disk full" };

    await submitVerdict(root, "stem_clarity", "disagree", "Ambiguous wording.");

    const section = row(root, "stem_clarity");
    expect(section.classList.contains("is-locked")).toBe(false);
    expect(section.querySelector(".row-error")!.textContent).toContain("StorageFailure");
    expect(
      section.querySelector<HTMLTextAreaElement>("textarea.rationale-input")!.value,
    ).toBe("Ambiguous wording.");
    // retrying the same row succeeds once the server recovers
    section.querySelector<HTMLButtonElement>("button.submit")!.click();
    await settle();
    expect(row(root, "stem_clarity").classList.contains("is-locked")).toBe(true);
  });

  it("renders an already fully judged item with every row locked", async () => {
    const judged = fixtureItem();
    judged.status = "fully_judged";
    judged.judgments = DIMENSIONS.map((dimension, i) => ({
      judgment_id: `j-${String(i + 1).padStart(8, "0")}`,
      question_id: "q-fix-0001",
      sme_id: "sme2",
      dimension,
      verdict: "agree",
      rationale: null,
      created_at: "1970-01-01T00:00:00Z",
    }));
    service.items.set("q-fix-0001", judged);

    await loginAs(root, app, "sme1");
    // queue skips fully judged items; open it directly
    await app.openItem("q-fix-0001");
    for (const dimension of DIMENSIONS) {
      expect(row(root, dimension).classList.contains("is-locked")).toBe(true);
    }
  });

  it("shows a warning badge on the answer row when the report is inconsistent", async () => {
    const flagged = fixtureItem();
    flagged.report.inconsistent = true;
    service.items.set("q-fix-0001", flagged);

    await loginAs(root, app, "sme1");
    expect(
      row(root, "correct_answer_validity").querySelector(".badge-inconsistent"),
    ).not.toBeNull();
    for (const dimension of DIMENSIONS) {
      if (dimension !== "correct_answer_validity") {
        expect(row(root, dimension).querySelector(".badge-inconsistent")).toBeNull();
      }
    }
  });

  it("sends the bearer token when one is supplied at login", async () => {
    app.start();
    root.querySelector<HTMLInputElement>("input.login-sme")!.value = "sme1";
    root.querySelector<HTMLInputElement>("input.login-token")!.value = "tok-1";
    root.querySelector("form.login")!.dispatchEvent(
      new Event("submit", { bubbles: true, cancelable: true }),
    );
    await settle();
    await submitVerdict(root, "stem_clarity", "agree");
    const post = service.posts()[0]!;
    expect(post.headers["Authorization"]).toBe("Bearer tok-1");
  });

  it("renders a retryable error state when the service is down", async () => {
    service.offline = true;
    await loginAs(root, app, "sme1");
    expect(root.querySelector(".load-error")).not.toBeNull();

    service.offline = false;
    root.querySelector<HTMLButtonElement>("button.retry")!.click();
    await settle();
    expect(root.querySelector(".stem")).not.toBeNull();
  });

  it("shows report numbers exactly as the service sent them", async () => {
    await loginAs(root, app, "sme1");
    root.querySelector<HTMLButtonElement>("button.show-report")!.click();
    await settle();

    expect(root.querySelector(".report-totals")!.textContent).toContain("7 rated pairs");
    const cell = root.querySelector(
      'tr[data-dimension="distractor_quality"] td[data-category="success"]',
    )!;
    expect(cell.textContent).toBe("85.7%");
    const calls = service.calls.filter((c) => c.path === "/report");
    expect(calls.length).toBe(1);
  });
});
