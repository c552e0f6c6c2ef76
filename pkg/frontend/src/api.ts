/** Typed fetch client for the planning service. */

import type {
  BoxBody,
  DetectionsOut,
  EndpointName,
  ErrorBody,
  ImageIn,
  LabelResult,
  Rotation,
  ScrewOut,
  SessionSnapshot,
  SideName,
  ViewName,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly detail: unknown;

  constructor(code: string, message: string, status: number, detail?: unknown) {
    super(message);
    this.name = "ApiError";
    this.code = code;
    this.status = status;
    this.detail = detail;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function errorFromResponse(response: Response): Promise<ApiError> {
  let body: ErrorBody | null = null;
  try {
    body = (await response.json()) as ErrorBody;
  } catch {
    body = null;
  }
  if (body && typeof body.code === "string") {
    return new ApiError(body.code, body.message, response.status, body.detail);
  }
  return new ApiError("HTTP_ERROR", `unexpected status ${response.status}`, response.status);
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    // bind so the client works with the bare global fetch function
    this.fetchFn = fetchFn ?? ((url, init) => globalThis.fetch(url, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError("NETWORK", `request failed: ${String(err)}`, 0);
    }
    if (!response.ok) {
      throw await errorFromResponse(response);
    }
    return (await response.json()) as T;
  }

  createSession(ap: ImageIn, lp: ImageIn, sessionId?: string): Promise<SessionSnapshot> {
    const body: Record<string, unknown> = { ap, lp };
    if (sessionId !== undefined) {
      body.session_id = sessionId;
    }
    return this.request("POST", "/sessions", body);
  }

  getSession(sessionId: string): Promise<SessionSnapshot> {
    return this.request("GET", `/sessions/${sessionId}`);
  }

  detect(sessionId: string): Promise<DetectionsOut> {
    return this.request("POST", `/sessions/${sessionId}/detect`);
  }

  attachDetections(sessionId: string, view: ViewName, boxes: BoxBody[]): Promise<DetectionsOut> {
    return this.request("POST", `/sessions/${sessionId}/detections`, { view, boxes });
  }

  setOrientation(
    sessionId: string,
    view: ViewName,
    rotation: Rotation,
    flip: boolean,
  ): Promise<SessionSnapshot> {
    return this.request("POST", `/sessions/${sessionId}/orientation`, { view, rotation, flip });
  }

  label(sessionId: string, view: ViewName, u: number, v: number, label: string): Promise<LabelResult> {
    return this.request("POST", `/sessions/${sessionId}/labels`, { view, u, v, label });
  }

  addScrew(sessionId: string, label: string, side: SideName): Promise<ScrewOut> {
    return this.request("POST", `/sessions/${sessionId}/screws`, { label, side });
  }

  dragEndpoint(
    sessionId: string,
    screwId: string,
    view: ViewName,
    endpoint: EndpointName,
    u: number,
    v: number,
  ): Promise<ScrewOut> {
    return this.request("PATCH", `/sessions/${sessionId}/screws/${screwId}/endpoint`, {
      view,
      endpoint,
      u,
      v,
    });
  }

  setParams(
    sessionId: string,
    screwId: string,
    params: { diameter?: number; screw_type?: string },
  ): Promise<ScrewOut> {
    return this.request("PATCH", `/sessions/${sessionId}/screws/${screwId}/params`, params);
  }

  listScrews(sessionId: string): Promise<ScrewOut[]> {
    return this.request("GET", `/sessions/${sessionId}/screws`);
  }

  async exportPlan(sessionId: string): Promise<string> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}/sessions/${sessionId}/plan`, { method: "GET" });
    } catch (err) {
      throw new ApiError("NETWORK", `request failed: ${String(err)}`, 0);
    }
    if (!response.ok) {
      throw await errorFromResponse(response);
    }
    return response.text();
  }
}
