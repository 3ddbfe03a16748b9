// Wire types for the review service JSON API. Field names mirror the
// server payloads exactly; nothing here is computed client-side.

export const DIMENSIONS = [
  "stem_clarity",
  "code_validity",
  "concept_alignment",
  "correct_answer_validity",
  "distractor_quality",
  "correct_feedback_quality",
  "distractor_feedback_quality",
] as const;

export type Dimension = (typeof DIMENSIONS)[number];

export type Verdict = "agree" | "disagree";

export interface QuestionOption {
  label: string;
  text: string;
  feedback: string;
}

export interface Question {
  question_id: string;
  topic: string;
  stem: string;
  code: string | null;
  options: QuestionOption[];
  correct_label: string;
  created_at: string;
}

export interface Finding {
  classification: string;
  rationale: string;
}

export interface ValidationReport {
  question_id: string;
  dimensions: Record<Dimension, Finding>;
  tool_trace: unknown[];
  inconsistent: boolean;
}

export interface Judgment {
  judgment_id: string;
  question_id: string;
  sme_id: string;
  dimension: Dimension;
  verdict: Verdict;
  rationale: string | null;
  created_at: string;
}

export type ItemStatus = "pending" | "partially_judged" | "fully_judged";

export interface ReviewItem {
  question: Question;
  report: ValidationReport;
  status: ItemStatus;
  judgments: Judgment[];
}

export interface ItemRow {
  question_id: string;
  topic: string;
  stem: string;
  status: ItemStatus;
  created_at: string;
}

export interface QualityReport {
  generated_at: string;
  totals: {
    questions: number;
    pairs: number;
    disagreement_rationales: number;
  };
  dimensions: Record<
    string,
    {
      n: number;
      counts: Record<string, number>;
      rates: Record<string, number>;
      percent: Record<string, string>;
      agreement: { per_sme: Record<string, number>; mean: number; sd: number };
    }
  >;
}

export interface ApiError {
  error: string;
  message: string;
}
