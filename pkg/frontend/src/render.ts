import { highlightCode, escapeHtml } from "./highlight.js";
import type { ReviewModel } from "./state.js";
import { progressLabel } from "./state.js";
import type {
  Dimension,
  ItemRow,
  QualityReport,
  ReviewItem,
} from "./types.js";
import { DIMENSIONS } from "./types.js";

const STATUS_LABEL: Record<string, string> = {
  pending: "pending",
  partially_judged: "partially judged",
  fully_judged: "fully judged",
};

function statusBadge(status: string): string {
  const label = STATUS_LABEL[status] ?? status;
  return `<span class="item-status" data-status="${escapeHtml(status)}">${escapeHtml(label)}</span>`;
}

export function renderLogin(): string {
  return `
  <form class="login">
    <h2>Sign in to review</h2>
    <label>Reviewer id
      <input name="sme_id" class="login-sme" autocomplete="username" required>
    </label>
    <label>Access token <small>(leave empty on a local service)</small>
      <input name="token" class="login-token" type="password" autocomplete="current-password">
    </label>
    <button type="submit" class="login-submit">Start reviewing</button>
  </form>`;
}

export function renderError(message: string): string {
  return `
  <div class="load-error">
    <p>${escapeHtml(message)}</p>
    <button type="button" class="retry">Retry</button>
  </div>`;
}

function renderOptions(item: ReviewItem): string {
  const rows = item.question.options
    .map((option) => {
      const correct = option.label === item.question.correct_label;
      return `
      <li class="option${correct ? " correct" : ""}" data-label="${escapeHtml(option.label)}">
        <div class="option-head">
          <span class="option-label">${escapeHtml(option.label)}</span>
          <span class="option-text">${escapeHtml(option.text)}</span>
          ${correct ? '<span class="correct-mark" title="designated correct answer">&#10003; correct</span>' : ""}
        </div>
        <p class="option-feedback">${escapeHtml(option.feedback)}</p>
      </li>`;
    })
    .join("");
  return `<ul class="options">${rows}</ul>`;
}

function verdictControls(model: ReviewModel, dimension: Dimension): string {
  const row = model.rows[dimension];
  const pressed = (v: string) => (row.verdict === v ? ' aria-pressed="true"' : ' aria-pressed="false"');
  const disabled = row.submitting ? " disabled" : "";
  return `
    <div class="verdict-controls">
      <button type="button" class="agree" data-dimension="${dimension}"${pressed("agree")}${disabled}>Agree</button>
      <button type="button" class="disagree" data-dimension="${dimension}"${pressed("disagree")}${disabled}>Disagree</button>
    </div>
    <textarea class="rationale-input" data-dimension="${dimension}"
      placeholder="Why do you disagree?"${disabled}>${escapeHtml(row.rationale)}</textarea>
    <button type="button" class="submit" data-dimension="${dimension}"${disabled}>
      ${row.submitting ? "Submitting&hellip;" : "Submit"}
    </button>
    ${row.error !== null ? `<p class="row-error" role="alert">${escapeHtml(row.error)}</p>` : ""}`;
}

function lockedControls(model: ReviewModel, dimension: Dimension): string {
  const judgment = model.lockingJudgment(dimension);
  if (judgment === null) return "";
  const rationale =
    judgment.rationale !== null && judgment.rationale !== ""
      ? `<p class="locked-rationale">${escapeHtml(judgment.rationale)}</p>`
      : "";
  return `
    <div class="locked" data-verdict="${judgment.verdict}">
      <span class="locked-verdict">${judgment.verdict === "agree" ? "Agreed" : "Disagreed"}</span>
      <span class="locked-by">by ${escapeHtml(judgment.sme_id)}</span>
      ${rationale}
    </div>`;
}

function renderValidatorRow(model: ReviewModel, dimension: Dimension): string {
  const finding = model.item.report.dimensions[dimension];
  const locked = model.isLocked(dimension);
  const inconsistent =
    dimension === "correct_answer_validity" && model.item.report.inconsistent;
  return `
  <section class="row${locked ? " is-locked" : ""}" data-dimension="${dimension}">
    <header class="row-head">
      <h4 class="dimension-name">${dimension.replace(/_/g, " ")}</h4>
      <span class="classification" data-value="${escapeHtml(finding.classification)}">${escapeHtml(finding.classification)}</span>
      ${inconsistent ? '<span class="badge-inconsistent" title="the validator\'s own execution output matches the designated answer">contradicted by execution</span>' : ""}
    </header>
    <p class="finding-rationale">${escapeHtml(finding.rationale)}</p>
    ${locked ? lockedControls(model, dimension) : verdictControls(model, dimension)}
  </section>`;
}

export function renderItemView(model: ReviewModel, rows: ItemRow[]): string {
  const item = model.item;
  const code =
    item.question.code === null
      ? '<p class="no-code">This question carries no code.</p>'
      : `<div class="code-panel">${highlightCode(item.question.code)}</div>`;
  const validatorRows = DIMENSIONS.map((d) => renderValidatorRow(model, d)).join("");
  return `
  <div class="review-head">
    <span class="progress">${escapeHtml(progressLabel(rows))}</span>
    ${statusBadge(item.status)}
    <button type="button" class="next-pending">Next pending</button>
    <button type="button" class="show-report">Quality report</button>
  </div>
  <div class="review-grid">
    <article class="question-panel">
      <h3 class="stem">${escapeHtml(item.question.stem)}</h3>
      ${code}
      ${renderOptions(item)}
    </article>
    <aside class="validator-panel">
      <h3>Validator findings</h3>
      ${validatorRows}
    </aside>
  </div>`;
}

export function renderReport(report: QualityReport, rows: ItemRow[]): string {
  const categories = ["success", "failure", "safeguarding", "inefficiency"];
  const header = categories.map((c) => `<th>${c}</th>`).join("");
  const body = Object.entries(report.dimensions)
    .map(([dimension, summary]) => {
      const cells = categories
        .map((c) => `<td data-category="${c}">${escapeHtml(summary.percent[c] ?? "0.0")}%</td>`)
        .join("");
      return `<tr data-dimension="${escapeHtml(dimension)}"><td>${escapeHtml(dimension)}</td><td>${summary.n}</td>${cells}</tr>`;
    })
    .join("");
  return `
  <div class="review-head">
    <span class="progress">${escapeHtml(progressLabel(rows))}</span>
    <button type="button" class="back-to-queue">Back to review</button>
  </div>
  <div class="report-panel">
    <p class="report-totals">
      ${report.totals.questions} questions,
      ${report.totals.pairs} rated pairs,
      ${report.totals.disagreement_rationales} disagreement rationales
    </p>
    <table class="report-table">
      <thead><tr><th>dimension</th><th>n</th>${header}</tr></thead>
      <tbody>${body}</tbody>
    </table>
  </div>`;
}

export function renderEmptyQueue(): string {
  return `
  <div class="empty-queue">
    <p>No items to review.</p>
    <button type="button" class="show-report">Quality report</button>
  </div>`;
}
