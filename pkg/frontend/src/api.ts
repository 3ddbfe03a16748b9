import type {
  Dimension,
  ItemRow,
  QualityReport,
  ReviewItem,
  Verdict,
} from "./types.js";

export class ApiFailure extends Error {
  readonly errorType: string;
  readonly status: number;

  constructor(errorType: string, message: string, status: number) {
    super(message);
    this.errorType = errorType;
    this.status = status;
  }
}

async function parseFailure(response: Response): Promise<ApiFailure> {
  let errorType = "HttpError";
  let message = `request failed with status ${response.status}`;
  try {
    const body = await response.json();
    if (body && typeof body.error === "string") {
      errorType = body.error;
      message = typeof body.message === "string" ? body.message : message;
    }
  } catch {
    // body was not JSON; keep the generic message
  }
  return new ApiFailure(errorType, message, response.status);
}

/** Thin typed wrapper over the review service endpoints. */
export class ApiClient {
  private readonly base: string;
  private token: string | null = null;
  smeId: string | null = null;

  constructor(base = "") {
    this.base = base.replace(/\/$/, "");
  }

  login(smeId: string, token: string | null): void {
    this.smeId = smeId;
    this.token = token && token.trim() !== "" ? token.trim() : null;
  }

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const headers: Record<string, string> = {
      ...(init?.headers as Record<string, string> | undefined),
    };
    if (init?.body !== undefined) {
      headers["Content-Type"] = "application/json";
    }
    if (this.token !== null) {
      headers["Authorization"] = `Bearer ${this.token}`;
    }
    const response = await fetch(this.base + path, { ...init, headers });
    if (!response.ok) {
      throw await parseFailure(response);
    }
    return response.json();
  }

  async listItems(): Promise<ItemRow[]> {
    const body = (await this.request("/items")) as { items: ItemRow[] };
    return body.items;
  }

  async getItem(questionId: string): Promise<ReviewItem> {
    return (await this.request(
      `/items/${encodeURIComponent(questionId)}`,
    )) as ReviewItem;
  }

  async submitJudgment(
    questionId: string,
    dimension: Dimension,
    verdict: Verdict,
    rationale: string | null,
  ): Promise<ReviewItem> {
    if (this.smeId === null) {
      throw new ApiFailure("NotLoggedIn", "log in before judging", 0);
    }
    return (await this.request(
      `/items/${encodeURIComponent(questionId)}/judgments`,
      {
        method: "POST",
        body: JSON.stringify({
          sme_id: this.smeId,
          dimension,
          verdict,
          rationale,
        }),
      },
    )) as ReviewItem;
  }

  async getReport(): Promise<QualityReport> {
    return (await this.request("/report")) as QualityReport;
  }
}
