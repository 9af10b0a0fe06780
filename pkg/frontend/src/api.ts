/** Typed REST client for the editing service. */

import type { ParamState } from "./controls.js";
import type { RejectionDetail } from "./diagnostics.js";

export interface SessionState {
    session_id: string;
    pcg: string;
    params: ParamState[];
    revision: number;
}

export class ApiError extends Error {
    constructor(readonly status: number, readonly detail: RejectionDetail) {
        super(detail.message ?? `HTTP ${status}`);
    }
}

async function request<T>(base: string, path: string,
                          init?: RequestInit): Promise<T> {
    const response = await fetch(base + path, {
        headers: { "Content-Type": "application/json" },
        ...init,
    });
    if (!response.ok) {
        let detail: RejectionDetail = { message: `HTTP ${response.status}` };
        try {
            const body = await response.json();
            if (typeof body.detail === "string") {
                detail = { message: body.detail };
            } else if (body.detail) {
                detail = body.detail;
            }
        } catch {
            // non-JSON error body; keep the status message
        }
        throw new ApiError(response.status, detail);
    }
    return response.json() as Promise<T>;
}

export class ServiceClient {
    constructor(readonly base: string) {}

    createFromPcg(pcg: string): Promise<SessionState> {
        return request(this.base, "/sessions", {
            method: "POST", body: JSON.stringify({ pcg }),
        });
    }

    createFromInstruction(instruction: string): Promise<SessionState> {
        return request(this.base, "/sessions", {
            method: "POST", body: JSON.stringify({ instruction }),
        });
    }

    getState(sessionId: string): Promise<SessionState> {
        return request(this.base, `/sessions/${sessionId}`);
    }

    patchParam(sessionId: string, name: string,
               value: number | boolean): Promise<{ revision: number }> {
        return request(this.base, `/sessions/${sessionId}/params`, {
            method: "PATCH", body: JSON.stringify({ name, value }),
        });
    }

    postEdit(sessionId: string, instruction: string): Promise<SessionState> {
        return request(this.base, `/sessions/${sessionId}/edits`, {
            method: "POST", body: JSON.stringify({ instruction }),
        });
    }

    streamUrl(sessionId: string): string {
        const ws = this.base.replace(/^http/, "ws");
        return `${ws}/sessions/${sessionId}/stream`;
    }
}
