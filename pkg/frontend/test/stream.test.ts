import { describe, expect, it } from "vitest";

import { encodeFrame } from "../src/frame.js";
import { StreamDemux } from "../src/stream.js";

function frameBytes(x: number): ArrayBuffer {
    return encodeFrame({
        vertexCount: 1, triangleCount: 0,
        positions: new Float32Array([x, 0, 0]),
        indices: new Uint32Array([]),
    });
}

function control(revision: number): string {
    return JSON.stringify({ revision, params: [] });
}

describe("StreamDemux", () => {
    it("pairs a control message with the following binary frame", () => {
        const demux = new StreamDemux();
        expect(demux.push(control(0)).kind).toBe("none");
        const result = demux.push(frameBytes(1.5));
        expect(result.kind).toBe("update");
        if (result.kind === "update") {
            expect(result.update.revision).toBe(0);
            expect(result.update.frame.positions[0]).toBe(1.5);
        }
    });

    it("drops stale revisions, keeps the latest", () => {
        const demux = new StreamDemux();
        demux.push(control(0));
        demux.push(frameBytes(0));
        demux.push(control(5));
        expect(demux.push(frameBytes(5)).kind).toBe("update");
        demux.push(control(3)); // late arrival
        expect(demux.push(frameBytes(3)).kind).toBe("none");
    });

    it("reports malformed frames and keeps going", () => {
        const demux = new StreamDemux();
        demux.push(control(0));
        const bad = demux.push(new ArrayBuffer(5));
        expect(bad.kind).toBe("bad-frame");
        demux.push(control(1));
        expect(demux.push(frameBytes(2)).kind).toBe("update");
    });

    it("ignores a frame that has no control header", () => {
        const demux = new StreamDemux();
        expect(demux.push(frameBytes(1)).kind).toBe("none");
    });
});
