import { describe, expect, it } from "vitest";

import { ApiError, GameApi, type FetchLike } from "./api.js";

function jsonResponse(status: number, body: unknown): Response {
    return new Response(JSON.stringify(body), {
        status,
        headers: { "Content-Type": "application/json" },
    });
}

function recordingFetch(routes: Record<string, (init?: RequestInit) => Response>) {
    const calls: { url: string; init?: RequestInit }[] = [];
    const fetchFn: FetchLike = async (url, init) => {
        calls.push({ url, init });
        const handler = routes[url];
        if (!handler) throw new Error(`unexpected request ${url}`);
        return handler(init);
    };
    return { calls, fetchFn };
}

describe("GameApi", () => {
    it("creates human sessions against the documented endpoint", async () => {
        const { calls, fetchFn } = recordingFetch({
            "/sessions": () =>
                jsonResponse(201, {
                    session_id: "abc",
                    room_id: "room01",
                    status: "active",
                    observation: { step_count: 0, available_actions: ["turn_to_east"] },
                }),
        });
        const api = new GameApi("", fetchFn);
        const created = await api.createSession("room01");
        expect(created.session_id).toBe("abc");
        expect(calls[0]?.init?.method).toBe("POST");
        expect(JSON.parse(String(calls[0]?.init?.body))).toEqual({
            room_id: "room01",
            mode: "human",
            hints: false,
        });
    });

    it("posts actions and returns the step payload", async () => {
        const { calls, fetchFn } = recordingFetch({
            "/sessions/abc/actions": () =>
                jsonResponse(200, {
                    observation: { step_count: 1 },
                    events: ["state_changed:desk=open"],
                    new_checkpoints: [],
                    terminal: false,
                    termination: null,
                    summary: null,
                }),
        });
        const api = new GameApi("", fetchFn);
        const step = await api.postAction("abc", "open drawer");
        expect(step.events).toEqual(["state_changed:desk=open"]);
        expect(JSON.parse(String(calls[0]?.init?.body))).toEqual({ action: "open drawer" });
    });

    it("surfaces 409 rejections with the fresh action list", async () => {
        const { fetchFn } = recordingFetch({
            "/sessions/abc/actions": () =>
                jsonResponse(409, {
                    detail: {
                        error: "unavailable_action",
                        action: "sing",
                        available_actions: ["turn_to_east", "back"],
                    },
                }),
        });
        const api = new GameApi("", fetchFn);
        const error = await api.postAction("abc", "sing").catch((e) => e);
        expect(error).toBeInstanceOf(ApiError);
        expect(error.isRejection).toBe(true);
        expect(error.detail.available_actions).toEqual(["turn_to_east", "back"]);
    });

    it("treats unknown sessions as non-rejection errors", async () => {
        const { fetchFn } = recordingFetch({
            "/sessions/ghost/observation": () =>
                jsonResponse(404, { detail: { error: "unknown_session" } }),
        });
        const api = new GameApi("", fetchFn);
        const error = await api.getObservation("ghost").catch((e) => e);
        expect(error).toBeInstanceOf(ApiError);
        expect(error.status).toBe(404);
        expect(error.isRejection).toBe(false);
    });

    it("prefixes the base url for every route", async () => {
        const { calls, fetchFn } = recordingFetch({
            "../rooms": () => jsonResponse(200, []),
        });
        const api = new GameApi("..", fetchFn);
        await api.listRooms();
        expect(calls[0]?.url).toBe("../rooms");
    });
});
