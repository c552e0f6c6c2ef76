import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

describe("ApiClient", () => {
  it("parses the error envelope into ApiError", async () => {
    const api = new ApiClient("http://x", async () =>
      jsonResponse(409, { code: "NO_MATCHING_BOX", message: "no comparable bounding box is found" }),
    );
    const err = await api.label("s", "AP", 1, 2, "L4").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("NO_MATCHING_BOX");
    expect(err.status).toBe(409);
    expect(err.message).toBe("no comparable bounding box is found");
  });

  it("wraps non-envelope failures as HTTP_ERROR", async () => {
    const api = new ApiClient("http://x", async () => new Response("gateway", { status: 502 }));
    const err = await api.getSession("s").catch((e) => e);
    expect(err.code).toBe("HTTP_ERROR");
    expect(err.status).toBe(502);
  });

  it("wraps network failures as NETWORK", async () => {
    const api = new ApiClient("http://x", async () => {
      throw new TypeError("fetch failed");
    });
    const err = await api.getSession("s").catch((e) => e);
    expect(err.code).toBe("NETWORK");
    expect(err.status).toBe(0);
  });

  it("sends JSON bodies and returns parsed JSON", async () => {
    let captured: { url: string; init?: RequestInit } | null = null;
    const api = new ApiClient("http://x/", async (url, init) => {
      captured = { url, init };
      return jsonResponse(201, { ok: true });
    });
    const result = await api.addScrew("sid", "L4", "left");
    expect(result).toEqual({ ok: true });
    expect(captured!.url).toBe("http://x/sessions/sid/screws");
    expect(captured!.init?.method).toBe("POST");
    expect(JSON.parse(String(captured!.init?.body))).toEqual({ label: "L4", side: "left" });
  });

  it("returns the plan document as raw text", async () => {
    const api = new ApiClient("http://x", async () =>
      new Response('{\n  "format": "spine-plan/1"\n}\n', { status: 200 }),
    );
    const text = await api.exportPlan("sid");
    expect(text.endsWith("\n")).toBe(true);
    expect(JSON.parse(text).format).toBe("spine-plan/1");
  });
});
