import type {
  Dimension,
  ItemRow,
  ReviewItem,
  Verdict,
} from "./types.js";
import { DIMENSIONS } from "./types.js";

export interface RowState {
  verdict: Verdict | null;
  rationale: string;
  error: string | null;
  submitting: boolean;
}

export interface DraftStore {
  load(questionId: string): Partial<Record<Dimension, RowState>> | null;
  save(questionId: string, drafts: Partial<Record<Dimension, RowState>>): void;
}

const DRAFT_KEY = "codequiz-review-drafts";

/** Drafts live in sessionStorage so switching items and coming back keeps
 *  unsubmitted rationale text; a fresh browser session starts clean. */
export class SessionDraftStore implements DraftStore {
  load(questionId: string): Partial<Record<Dimension, RowState>> | null {
    try {
      const raw = sessionStorage.getItem(DRAFT_KEY);
      if (raw === null) return null;
      const all = JSON.parse(raw) as Record<string, Partial<Record<Dimension, RowState>>>;
      return all[questionId] ?? null;
    } catch {
      return null;
    }
  }

  save(questionId: string, drafts: Partial<Record<Dimension, RowState>>): void {
    try {
      const raw = sessionStorage.getItem(DRAFT_KEY);
      const all = raw === null ? {} : (JSON.parse(raw) as Record<string, unknown>);
      all[questionId] = drafts;
      sessionStorage.setItem(DRAFT_KEY, JSON.stringify(all));
    } catch {
      // storage unavailable; drafts just die with the page
    }
  }
}

function freshRow(): RowState {
  return { verdict: null, rationale: "", error: null, submitting: false };
}

/** Per-item view model: the server item plus one draft row per dimension.
 *  All verdicts round-trip through the API; this class never computes
 *  quality numbers. */
export class ReviewModel {
  item: ReviewItem;
  readonly smeId: string;
  readonly rows: Record<Dimension, RowState>;
  private readonly drafts: DraftStore;

  constructor(item: ReviewItem, smeId: string, drafts: DraftStore) {
    this.item = item;
    this.smeId = smeId;
    this.drafts = drafts;
    this.rows = Object.fromEntries(
      DIMENSIONS.map((d) => [d, freshRow()]),
    ) as Record<Dimension, RowState>;
    const saved = drafts.load(item.question.question_id);
    if (saved !== null) {
      for (const dimension of DIMENSIONS) {
        const row = saved[dimension];
        if (row !== undefined && !this.isLocked(dimension)) {
          this.rows[dimension] = { ...freshRow(), ...row, submitting: false };
        }
      }
    }
  }

  /** The judgment that locks a row: one by this SME, or any once the item
   *  is fully judged. */
  lockingJudgment(dimension: Dimension) {
    const mine = this.item.judgments.find(
      (j) => j.dimension === dimension && j.sme_id === this.smeId,
    );
    if (mine !== undefined) return mine;
    if (this.item.status === "fully_judged") {
      return this.item.judgments.find((j) => j.dimension === dimension) ?? null;
    }
    return null;
  }

  isLocked(dimension: Dimension): boolean {
    return this.lockingJudgment(dimension) !== null;
  }

  chooseVerdict(dimension: Dimension, verdict: Verdict): void {
    const row = this.rows[dimension];
    row.verdict = verdict;
    row.error = null;
    this.persist();
  }

  setRationale(dimension: Dimension, text: string): void {
    this.rows[dimension].rationale = text;
    this.persist();
  }

  /** Client-side gate mirroring the server rule: a disagree without a
   *  rationale never leaves the browser. */
  validate(dimension: Dimension): string | null {
    const row = this.rows[dimension];
    if (row.verdict === null) {
      return "choose agree or disagree first";
    }
    if (row.verdict === "disagree" && row.rationale.trim() === "") {
      return "a disagree needs a rationale";
    }
    return null;
  }

  markSubmitting(dimension: Dimension): void {
    this.rows[dimension].submitting = true;
    this.rows[dimension].error = null;
  }

  applyServerItem(item: ReviewItem): void {
    this.item = item;
    for (const dimension of DIMENSIONS) {
      if (this.isLocked(dimension)) {
        this.rows[dimension] = freshRow();
      } else {
        this.rows[dimension].submitting = false;
      }
    }
    this.persist();
  }

  markFailed(dimension: Dimension, message: string): void {
    const row = this.rows[dimension];
    row.submitting = false;
    row.error = message;
  }

  private persist(): void {
    const pending: Partial<Record<Dimension, RowState>> = {};
    for (const dimension of DIMENSIONS) {
      const row = this.rows[dimension];
      if (!this.isLocked(dimension) && (row.verdict !== null || row.rationale !== "")) {
        pending[dimension] = { ...row, submitting: false };
      }
    }
    this.drafts.save(this.item.question.question_id, pending);
  }
}

/** Queue helpers; rows arrive from the server already ordered by
 *  (created_at, question_id). */
export function judgedCount(rows: ItemRow[]): number {
  return rows.filter((r) => r.status === "fully_judged").length;
}

export function progressLabel(rows: ItemRow[]): string {
  return `${judgedCount(rows)} of ${rows.length} judged`;
}

export function nextPending(
  rows: ItemRow[],
  after: string | null,
): ItemRow | null {
  const start = after === null ? 0 : rows.findIndex((r) => r.question_id === after) + 1;
  for (let offset = 0; offset < rows.length; offset += 1) {
    const row = rows[(start + offset) % rows.length];
    if (row !== undefined && row.status !== "fully_judged") return row;
  }
  return null;
}
