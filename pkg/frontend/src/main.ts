import { ApiClient, ApiFailure } from "./api.js";
import {
  renderEmptyQueue,
  renderError,
  renderItemView,
  renderLogin,
  renderReport,
} from "./render.js";
import {
  ReviewModel,
  SessionDraftStore,
  nextPending,
  type DraftStore,
} from "./state.js";
import type { Dimension, ItemRow, Verdict } from "./types.js";

export class ReviewApp {
  private readonly root: HTMLElement;
  private readonly api: ApiClient;
  private readonly drafts: DraftStore;
  private rows: ItemRow[] = [];
  private model: ReviewModel | null = null;

  constructor(root: HTMLElement, api: ApiClient, drafts: DraftStore = new SessionDraftStore()) {
    this.root = root;
    this.api = api;
    this.drafts = drafts;
    root.addEventListener("click", (event) => this.onClick(event));
    root.addEventListener("submit", (event) => this.onSubmit(event));
    root.addEventListener("input", (event) => this.onInput(event));
  }

  start(): void {
    this.root.innerHTML = renderLogin();
  }

  private fail(message: string, retry: () => void): void {
    this.root.innerHTML = renderError(message);
    const button = this.root.querySelector<HTMLButtonElement>("button.retry");
    button?.addEventListener("click", retry, { once: true });
  }

  async login(smeId: string, token: string | null): Promise<void> {
    this.api.login(smeId, token);
    await this.loadQueue();
  }

  async loadQueue(): Promise<void> {
    try {
      this.rows = await this.api.listItems();
    } catch (error) {
      this.fail(describe(error), () => void this.loadQueue());
      return;
    }
    const next = nextPending(this.rows, null);
    if (next === null) {
      this.root.innerHTML = renderEmptyQueue();
      return;
    }
    await this.openItem(next.question_id);
  }

  async openItem(questionId: string): Promise<void> {
    try {
      const item = await this.api.getItem(questionId);
      this.model = new ReviewModel(item, this.api.smeId ?? "", this.drafts);
    } catch (error) {
      this.fail(describe(error), () => void this.openItem(questionId));
      return;
    }
    this.renderReview();
  }

  async openNextPending(): Promise<void> {
    try {
      this.rows = await this.api.listItems();
    } catch (error) {
      this.fail(describe(error), () => void this.openNextPending());
      return;
    }
    const current = this.model?.item.question.question_id ?? null;
    const next = nextPending(this.rows, current);
    if (next === null) {
      this.root.innerHTML = renderEmptyQueue();
      return;
    }
    await this.openItem(next.question_id);
  }

  async showReport(): Promise<void> {
    try {
      const report = await this.api.getReport();
      this.root.innerHTML = renderReport(report, this.rows);
    } catch (error) {
      this.fail(describe(error), () => void this.showReport());
    }
  }

  private renderReview(focusDimension?: Dimension): void {
    if (this.model === null) return;
    this.root.innerHTML = renderItemView(this.model, this.rows);
    if (focusDimension !== undefined) {
      this.root
        .querySelector<HTMLTextAreaElement>(
          `textarea.rationale-input[data-dimension="${focusDimension}"]`,
        )
        ?.focus();
    }
  }

  private refreshRowCache(): void {
    if (this.model === null) return;
    const item = this.model.item;
    this.rows = this.rows.map((row) =>
      row.question_id === item.question.question_id
        ? { ...row, status: item.status }
        : row,
    );
  }

  async submitRow(dimension: Dimension): Promise<void> {
    const model = this.model;
    if (model === null) return;
    this.syncRationale(dimension);
    const problem = model.validate(dimension);
    if (problem !== null) {
      model.markFailed(dimension, problem);
      this.renderReview(dimension);
      return;
    }
    const row = model.rows[dimension];
    const rationale = row.rationale.trim() === "" ? null : row.rationale.trim();
    model.markSubmitting(dimension);
    this.renderReview();
    try {
      const updated = await this.api.submitJudgment(
        model.item.question.question_id,
        dimension,
        row.verdict as Verdict,
        rationale,
      );
      model.applyServerItem(updated);
      this.refreshRowCache();
      this.renderReview();
    } catch (error) {
      model.markFailed(dimension, describe(error));
      const focus =
        error instanceof ApiFailure && error.errorType === "MissingRationale"
          ? dimension
          : undefined;
      this.renderReview(focus);
    }
  }

  private syncRationale(dimension: Dimension): void {
    const area = this.root.querySelector<HTMLTextAreaElement>(
      `textarea.rationale-input[data-dimension="${dimension}"]`,
    );
    if (area !== null && this.model !== null) {
      this.model.setRationale(dimension, area.value);
    }
  }

  private onClick(event: Event): void {
    const target = event.target as HTMLElement | null;
    if (target === null || this.modelTargetsDisabled(target)) return;
    const dimension = target.getAttribute("data-dimension") as Dimension | null;
    if (target.matches("button.agree") && dimension !== null) {
      this.syncAllRationales();
      this.model?.chooseVerdict(dimension, "agree");
      this.renderReview();
    } else if (target.matches("button.disagree") && dimension !== null) {
      this.syncAllRationales();
      this.model?.chooseVerdict(dimension, "disagree");
      this.renderReview(dimension);
    } else if (target.matches("button.submit") && dimension !== null) {
      void this.submitRow(dimension);
    } else if (target.matches("button.next-pending")) {
      void this.openNextPending();
    } else if (target.matches("button.show-report")) {
      void this.showReport();
    } else if (target.matches("button.back-to-queue")) {
      if (this.model !== null) this.renderReview();
      else void this.loadQueue();
    }
  }

  private modelTargetsDisabled(target: HTMLElement): boolean {
    return target instanceof HTMLButtonElement && target.disabled;
  }

  private syncAllRationales(): void {
    for (const area of this.root.querySelectorAll<HTMLTextAreaElement>(
      "textarea.rationale-input",
    )) {
      const dimension = area.getAttribute("data-dimension") as Dimension | null;
      if (dimension !== null && this.model !== null) {
        this.model.setRationale(dimension, area.value);
      }
    }
  }

  private onInput(event: Event): void {
    const target = event.target as HTMLElement | null;
    if (target instanceof HTMLTextAreaElement && target.matches("textarea.rationale-input")) {
      const dimension = target.getAttribute("data-dimension") as Dimension | null;
      if (dimension !== null) this.model?.setRationale(dimension, target.value);
    }
  }

  private onSubmit(event: Event): void {
    const form = event.target as HTMLElement | null;
    if (form !== null && form.matches("form.login")) {
      event.preventDefault();
      const sme = this.root.querySelector<HTMLInputElement>("input.login-sme");
      const token = this.root.querySelector<HTMLInputElement>("input.login-token");
      const smeId = sme?.value.trim() ?? "";
      if (smeId === "") return;
      void this.login(smeId, token?.value ?? null);
    }
  }
}

function describe(error: unknown): string {
  if (error instanceof ApiFailure) return `${error.errorType}: ${error.message}`;
  if (error instanceof Error) return error.message;
  return String(error);
}

export function boot(): void {
  const root = document.getElementById("app");
  if (root !== null) {
    const app = new ReviewApp(root, new ApiClient(""));
    app.start();
  }
}

if (typeof document !== "undefined" && document.getElementById("app") !== null) {
  boot();
}
