import { describe, expect, it } from "vitest";

import { FrameError, decodeFrame, encodeFrame } from "../src/frame.js";

function cubeFrame() {
    // two triangles of a unit quad plus an off-plane vertex
    const positions = new Float32Array([
        0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 0.5, 0.5, 1.25,
    ]);
    const indices = new Uint32Array([0, 1, 2, 0, 2, 3, 0, 1, 4]);
    return { vertexCount: 5, triangleCount: 3, positions, indices };
}

describe("decodeFrame", () => {
    it("round-trips through encodeFrame losslessly", () => {
        const frame = cubeFrame();
        const decoded = decodeFrame(encodeFrame(frame));
        expect(decoded.vertexCount).toBe(5);
        expect(decoded.triangleCount).toBe(3);
        expect(Array.from(decoded.positions)).toEqual(Array.from(frame.positions));
        expect(Array.from(decoded.indices)).toEqual(Array.from(frame.indices));
    });

    it("reads the documented little-endian layout", () => {
        // hand-built buffer: 1 vertex at (1.5, -2, 0.25), 0 triangles
        const buffer = new ArrayBuffer(8 + 12);
        const view = new DataView(buffer);
        view.setUint32(0, 1, true);
        view.setUint32(4, 0, true);
        view.setFloat32(8, 1.5, true);
        view.setFloat32(12, -2, true);
        view.setFloat32(16, 0.25, true);
        const frame = decodeFrame(buffer);
        expect(Array.from(frame.positions)).toEqual([1.5, -2, 0.25]);
        expect(frame.indices.length).toBe(0);
    });

    it("preserves float32 values exactly (server sends f32)", () => {
        const value = Math.fround(0.30000001192092896);
        const frame = {
            vertexCount: 1, triangleCount: 0,
            positions: new Float32Array([value, 0, 0]),
            indices: new Uint32Array([]),
        };
        expect(decodeFrame(encodeFrame(frame)).positions[0]).toBe(value);
    });

    it("rejects short buffers", () => {
        expect(() => decodeFrame(new ArrayBuffer(4))).toThrow(FrameError);
    });

    it("rejects size mismatches", () => {
        const good = encodeFrame(cubeFrame());
        expect(() => decodeFrame(good.slice(0, good.byteLength - 4)))
            .toThrow(/size mismatch/);
    });

    it("rejects out-of-range indices", () => {
        const frame = cubeFrame();
        frame.indices[0] = 99;
        expect(() => decodeFrame(encodeFrame(frame))).toThrow(/out of range/);
    });
});
