/** Thin typed client for the documented /api endpoints.
 *
 * The explorer talks to exactly three endpoints: /api/query/nl,
 * /api/query/cypher and /api/provenance/{id}. Errors surface as ApiError
 * carrying the envelope's code/message and the failing pipeline stage.
 */

import type { Envelope, ProvenanceData, QueryData } from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    readonly code: string,
    readonly status: number,
    readonly stage?: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async unwrap<T>(response: Response): Promise<T> {
    let body: Envelope<T>;
    try {
      body = (await response.json()) as Envelope<T>;
    } catch {
      throw new ApiError(`unreadable response (HTTP ${response.status})`, "BadResponse", response.status);
    }
    if (!body.ok || body.data === undefined) {
      const err = body.error ?? { code: "UnknownError", message: `HTTP ${response.status}` };
      throw new ApiError(err.message, err.code, response.status, err.stage);
    }
    return body.data;
  }

  private async post<T>(path: string, payload: unknown): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    return this.unwrap<T>(response);
  }

  async nlQuery(question: string): Promise<QueryData> {
    return this.post<QueryData>("/api/query/nl", { question });
  }

  async cypherQuery(query: string): Promise<QueryData> {
    return this.post<QueryData>("/api/query/cypher", { query });
  }

  async provenance(elementId: string): Promise<ProvenanceData> {
    const response = await this.fetchFn(
      `${this.baseUrl}/api/provenance/${encodeURIComponent(elementId)}`,
    );
    return this.unwrap<ProvenanceData>(response);
  }
}
