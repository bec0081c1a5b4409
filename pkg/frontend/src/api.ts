// Thin fetch client for the allocation service. Every non-2xx response is
// surfaced as an ApiError carrying the service's problem document.

import type {
  Problem,
  RecommendationResponse,
  RescuePointForm,
  SolverOptions,
} from './types.js';

export class ApiError extends Error {
  readonly problem: Problem;
  readonly status: number;

  constructor(status: number, problem: Problem) {
    super(problem.message);
    this.status = status;
    this.problem = problem;
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly token?: string,
  ) {}

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { 'Content-Type': 'application/json' };
    if (this.token) {
      headers['Authorization'] = `Bearer ${this.token}`;
    }
    const response = await fetch(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => null);
    if (!response.ok) {
      const problem: Problem =
        payload && typeof payload.code === 'string'
          ? payload
          : { code: 'transport_error', message: `HTTP ${response.status}`, details: {} };
      throw new ApiError(response.status, problem);
    }
    return payload as T;
  }

  health(): Promise<{ status: string }> {
    return this.call('GET', '/health');
  }

  upsertRescuePoint(form: RescuePointForm): Promise<{ id: string }> {
    return this.call('POST', '/rescue-points', form);
  }

  requestRecommendations(
    points: RescuePointForm[],
    options?: SolverOptions,
  ): Promise<RecommendationResponse> {
    return this.call('POST', '/recommendations', { points, options });
  }

  getRecommendation(requestId: string): Promise<RecommendationResponse> {
    return this.call('GET', `/recommendations/${requestId}`);
  }

  accept(requestId: string): Promise<{ request_id: string; dispatched_resources: string[] }> {
    return this.call('POST', `/recommendations/${requestId}/decision`, { decision: 'accept' });
  }

  revise(requestId: string, points: RescuePointForm[]): Promise<RecommendationResponse> {
    return this.call('POST', `/recommendations/${requestId}/decision`, {
      decision: 'revise',
      points,
    });
  }
}
