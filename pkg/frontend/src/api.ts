// Typed client for the session HTTP API (docs/http-api.md).
// fetch is injectable so tests can run without a server.

export interface RoomInfo {
    room_id: string;
    receptacles: number;
    items: number;
    checkpoints: number;
    oracle_length: number;
}

export interface ObservationPayload {
    session_id: string;
    room_id: string;
    mode: string;
    status: string;
    step_count: number;
    scene_key: string;
    caption: string;
    direction: string;
    image_ref: string | null;
    available_actions: string[];
    inventory: string[];
    puzzle_mode: boolean;
    hint: string | null;
    achieved_checkpoints: number;
    total_checkpoints: number;
    elapsed_s: number;
}

export interface SessionSummary {
    termination: string;
    escaped: boolean;
    steps: number;
    duration_s: number;
    gc: number;
    spl: number;
    achieved_checkpoints: number;
    total_checkpoints: number;
}

export interface StepResponse {
    observation: ObservationPayload;
    events: string[];
    new_checkpoints: string[];
    terminal: boolean;
    termination: string | null;
    summary: SessionSummary | null;
}

export interface CreateSessionResponse {
    session_id: string;
    room_id: string;
    status: string;
    observation: ObservationPayload;
}

export interface RejectionDetail {
    error: string;
    action?: string;
    available_actions?: string[];
    summary?: SessionSummary;
}

export class ApiError extends Error {
    constructor(
        public status: number,
        public detail: RejectionDetail,
    ) {
        super(`${detail.error ?? "request_failed"} (${status})`);
    }

    get isRejection(): boolean {
        return this.status === 409;
    }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class GameApi {
    constructor(
        private baseUrl: string = "",
        private fetchFn: FetchLike = (input, init) => fetch(input, init),
    ) {}

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const response = await this.fetchFn(this.baseUrl + path, {
            method,
            headers: body !== undefined ? { "Content-Type": "application/json" } : undefined,
            body: body !== undefined ? JSON.stringify(body) : undefined,
        });
        const payload = await response.json().catch(() => ({}));
        if (!response.ok) {
            const detail = (payload as { detail?: RejectionDetail }).detail ?? { error: "request_failed" };
            throw new ApiError(response.status, detail);
        }
        return payload as T;
    }

    listRooms(): Promise<RoomInfo[]> {
        return this.request("GET", "/rooms");
    }

    createSession(roomId: string, hints = false): Promise<CreateSessionResponse> {
        return this.request("POST", "/sessions", { room_id: roomId, mode: "human", hints });
    }

    getObservation(sessionId: string): Promise<ObservationPayload> {
        return this.request("GET", `/sessions/${sessionId}/observation`);
    }

    postAction(sessionId: string, action: string): Promise<StepResponse> {
        return this.request("POST", `/sessions/${sessionId}/actions`, { action });
    }
}
