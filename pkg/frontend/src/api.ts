// Thin typed client for the grading service. The UI displays what these
// calls return and nothing else.

import type {
  ApiError,
  CheckResponse,
  ExerciseDetail,
  ExerciseSummary,
  Profile,
} from "./types.js";

export class ApiClientError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly payload: ApiError["error"]
  ) {
    super(`${code}: ${payload.detail}`);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private token: string
  ) {}

  setToken(token: string): void {
    this.token = token;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      method,
      headers: {
        Authorization: `Bearer ${this.token}`,
        ...(body !== undefined ? { "Content-Type": "application/json" } : {}),
      },
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    const payload = (await response.json()) as T | ApiError;
    if (!response.ok) {
      const error = (payload as ApiError).error ?? {
        code: "HTTP_ERROR",
        detail: response.statusText,
      };
      throw new ApiClientError(response.status, error.code, error);
    }
    return payload as T;
  }

  listExercises(): Promise<ExerciseSummary[]> {
    return this.request("GET", "/api/exercises");
  }

  exerciseDetail(exerciseId: string): Promise<ExerciseDetail> {
    return this.request("GET", `/api/exercises/${encodeURIComponent(exerciseId)}`);
  }

  submitCheck(exerciseId: string, documentText: string): Promise<CheckResponse> {
    return this.request("POST", `/api/exercises/${encodeURIComponent(exerciseId)}/checks`, {
      document: documentText,
    });
  }

  solutions(exerciseId: string): Promise<{ solutions: unknown[] }> {
    return this.request("GET", `/api/exercises/${encodeURIComponent(exerciseId)}/solutions`);
  }

  profile(): Promise<Profile> {
    return this.request("GET", "/api/profile");
  }

  equip(props: string[]): Promise<{ equippedProps: string[] }> {
    return this.request("PUT", "/api/profile/avatar", { equippedProps: props });
  }

  leaderboard(kind: "xp" | "completed"): Promise<{ entries: unknown[] }>;
  leaderboard(kind: "exercise", exerciseId: string): Promise<{ entries: unknown[] }>;
  leaderboard(kind: string, exerciseId?: string): Promise<{ entries: unknown[] }> {
    const path =
      kind === "exercise"
        ? `/api/leaderboards/exercise/${encodeURIComponent(exerciseId ?? "")}`
        : `/api/leaderboards/${kind}`;
    return this.request("GET", path);
  }
}
