// In-memory stand-in for the review service: real judgment semantics
// (upsert per SME+dimension, status transitions), recorded calls, and
// fault injection. Tests drive the app against this through fetch.

import { vi } from "vitest";
import type { DraftStore } from "../src/state.js";
import type {
  Dimension,
  ItemRow,
  Judgment,
  QualityReport,
  ReviewItem,
  Verdict,
} from "../src/types.js";
import { DIMENSIONS } from "../src/types.js";

export interface RecordedCall {
  method: string;
  path: string;
  body: unknown;
  headers: Record<string, string>;
}

export function fixtureItem(overrides: Partial<ReviewItem> = {}): ReviewItem {
  const base: ReviewItem = {
    question: {
      question_id: "q-fix-0001",
      topic: "loops",
      stem: "The following program accumulates a total over range(5). What does it print?",
      code: "total = 0\nfor i in range(5):\n    total = total + i\nprint(total)\n",
      options: [
        { label: "A", text: "10", feedback: "Right: 0+1+2+3+4 is 10." },
        { label: "B", text: "15", feedback: "15 would need range(6)." },
        { label: "C", text: "5", feedback: "5 is the iteration count, not the sum." },
        { label: "D", text: "0", feedback: "total is not reset inside the loop." },
      ],
      correct_label: "A",
      created_at: "1970-01-01T00:00:00Z",
    },
    report: {
      question_id: "q-fix-0001",
      dimensions: Object.fromEntries(
        DIMENSIONS.map((d, i) => [
          d,
          {
            classification: i < 4 ? "yes" : "good",
            rationale: `${d.replace(/_/g, " ")} checks out against the material.`,
          },
        ]),
      ) as ReviewItem["report"]["dimensions"],
      tool_trace: [
        {
          tool: "run_code",
          arguments: { source: "total = 0\nfor i in range(5):\n    total = total + i\nprint(total)\n" },
          result: { status: "ok", stdout: "10\n" },
        },
      ],
      inconsistent: false,
    },
    status: "pending",
    judgments: [],
  };
  return { ...base, ...overrides };
}

export function fixtureReport(): QualityReport {
  return {
    generated_at: "1970-01-01T00:00:00Z",
    totals: { questions: 1, pairs: 7, disagreement_rationales: 1 },
    dimensions: Object.fromEntries(
      DIMENSIONS.map((d) => [
        d,
        {
          n: 1,
          counts: { success: 1, failure: 0, safeguarding: 0, inefficiency: 0 },
          rates: { success: 1, failure: 0, safeguarding: 0, inefficiency: 0 },
          percent: {
            success: d === "distractor_quality" ? "85.7" : "100.0",
            failure: d === "distractor_quality" ? "14.3" : "0.0",
            safeguarding: "0.0",
            inefficiency: "0.0",
          },
          agreement: { per_sme: { sme1: 1 }, mean: 1, sd: 0 },
        },
      ]),
    ),
  };
}

export class StubService {
  items: Map<string, ReviewItem>;
  report: QualityReport;
  calls: RecordedCall[] = [];
  failNext: { status: number; error: string; message: string } | null = null;
  offline = false;
  private judgmentSeq = 0;

  constructor(items: ReviewItem[]) {
    this.items = new Map(items.map((item) => [item.question.question_id, item]));
    this.report = fixtureReport();
  }

  posts(): RecordedCall[] {
    return this.calls.filter((c) => c.method === "POST");
  }

  install(): void {
    vi.stubGlobal("fetch", (input: RequestInfo | URL, init?: RequestInit) =>
      this.handle(String(input), init),
    );
  }

  private respond(status: number, payload: unknown): Response {
    return new Response(JSON.stringify(payload), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  }

  private async handle(url: string, init?: RequestInit): Promise<Response> {
    const method = (init?.method ?? "GET").toUpperCase();
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const body = typeof init?.body === "string" ? JSON.parse(init.body) : null;
    this.calls.push({
      method,
      path,
      body,
      headers: { ...(init?.headers as Record<string, string> | undefined) },
    });
    if (this.offline) {
      throw new TypeError("network down");
    }
    if (this.failNext !== null) {
      const fault = this.failNext;
      this.failNext = null;
      return this.respond(fault.status, { error: fault.error, message: fault.message });
    }

    if (method === "GET" && path === "/items") {
      const rows: ItemRow[] = [...this.items.values()]
        .map((item) => ({
          question_id: item.question.question_id,
          topic: item.question.topic,
          stem: item.question.stem,
          status: item.status,
          created_at: item.question.created_at,
        }))
        .sort((a, b) =>
          (a.created_at + a.question_id).localeCompare(b.created_at + b.question_id),
        );
      return this.respond(200, { items: rows });
    }

    const judgmentMatch = path.match(/^\/items\/([^/]+)\/judgments$/);
    if (method === "POST" && judgmentMatch !== null) {
      const item = this.items.get(decodeURIComponent(judgmentMatch[1] ?? ""));
      if (item === undefined) {
        return this.respond(404, { error: "UnknownQuestion", message: "no such item" });
      }
      const { sme_id, dimension, verdict, rationale } = body as {
        sme_id: string;
        dimension: Dimension;
        verdict: Verdict;
        rationale: string | null;
      };
      if (verdict === "disagree" && (rationale === null || rationale.trim() === "")) {
        return this.respond(400, {
          error: "MissingRationale",
          message: "a disagree judgment needs a rationale",
        });
      }
      this.judgmentSeq += 1;
      const judgment: Judgment = {
        judgment_id: `j-${String(this.judgmentSeq).padStart(8, "0")}`,
        question_id: item.question.question_id,
        sme_id,
        dimension,
        verdict,
        rationale: rationale ?? null,
        created_at: "1970-01-01T00:00:00Z",
      };
      item.judgments = [
        ...item.judgments.filter(
          (j) => !(j.sme_id === sme_id && j.dimension === dimension),
        ),
        judgment,
      ];
      const covered = new Set(
        item.judgments.filter((j) => j.sme_id === sme_id).map((j) => j.dimension),
      );
      item.status =
        covered.size === DIMENSIONS.length
          ? "fully_judged"
          : item.judgments.length > 0
            ? "partially_judged"
            : "pending";
      return this.respond(200, structuredClone(item));
    }

    const itemMatch = path.match(/^\/items\/([^/]+)$/);
    if (method === "GET" && itemMatch !== null) {
      const item = this.items.get(decodeURIComponent(itemMatch[1] ?? ""));
      if (item === undefined) {
        return this.respond(404, { error: "UnknownQuestion", message: "no such item" });
      }
      return this.respond(200, structuredClone(item));
    }

    if (method === "GET" && path === "/report") {
      return this.respond(200, structuredClone(this.report));
    }

    return this.respond(404, { error: "UnknownPath", message: path });
  }
}

export class MemoryDraftStore implements DraftStore {
  private readonly store = new Map<string, unknown>();

  load(questionId: string) {
    return (this.store.get(questionId) ?? null) as ReturnType<DraftStore["load"]>;
  }

  save(questionId: string, drafts: unknown): void {
    this.store.set(questionId, structuredClone(drafts));
  }
}

export async function settle(): Promise<void> {
  for (let i = 0; i < 5; i += 1) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}
