/** WebSocket mesh stream: pairs JSON control messages with binary frames.
 *
 * The server interleaves {revision, params} JSON with one binary frame per
 * revision. A RevisionGate drops anything stale, so a slow tab renders the
 * latest state rather than a backlog. The demux is socket-free for testing.
 */

import { MeshFrame, decodeFrame } from "./frame.js";
import { ParamState, RevisionGate } from "./controls.js";

export interface StreamUpdate {
    revision: number;
    params: ParamState[];
    frame: MeshFrame;
}

interface ControlMessage {
    revision: number;
    params: ParamState[];
}

export type DemuxResult =
    | { kind: "update"; update: StreamUpdate }
    | { kind: "bad-frame"; error: Error }
    | { kind: "none" };

export class StreamDemux {
    private gate = new RevisionGate();
    private pendingControl: ControlMessage | null = null;

    push(data: string | ArrayBuffer): DemuxResult {
        if (typeof data === "string") {
            this.pendingControl = JSON.parse(data) as ControlMessage;
            return { kind: "none" };
        }
        const control = this.pendingControl;
        this.pendingControl = null;
        if (!control) return { kind: "none" }; // frame without its header; drop
        let frame: MeshFrame;
        try {
            frame = decodeFrame(data);
        } catch (error) {
            return { kind: "bad-frame", error: error as Error };
        }
        if (!this.gate.admit(control.revision)) return { kind: "none" };
        return {
            kind: "update",
            update: { revision: control.revision, params: control.params, frame },
        };
    }
}

export interface StreamHandlers {
    onUpdate(update: StreamUpdate): void;
    onBadFrame(error: Error): void;
    onClose?(): void;
}

export class SessionStream {
    private socket: WebSocket;
    private demux = new StreamDemux();

    constructor(url: string, private handlers: StreamHandlers) {
        this.socket = new WebSocket(url);
        this.socket.binaryType = "arraybuffer";
        this.socket.onmessage = (event) => {
            const result = this.demux.push(event.data as string | ArrayBuffer);
            if (result.kind === "update") this.handlers.onUpdate(result.update);
            else if (result.kind === "bad-frame") this.handlers.onBadFrame(result.error);
        };
        this.socket.onclose = () => handlers.onClose?.();
    }

    close(): void {
        this.socket.close();
    }
}
