/** Binary mesh frame codec.
 *
 * Wire layout (little endian):
 *   [u32 vertex-count][u32 tri-count][f32 x y z ...][u32 i0 i1 i2 ...]
 */

export interface MeshFrame {
    vertexCount: number;
    triangleCount: number;
    positions: Float32Array;
    indices: Uint32Array;
}

export class FrameError extends Error {}

const HEADER_BYTES = 8;

export function decodeFrame(buffer: ArrayBuffer): MeshFrame {
    if (buffer.byteLength < HEADER_BYTES) {
        throw new FrameError(`frame too short: ${buffer.byteLength} bytes`);
    }
    const view = new DataView(buffer);
    const vertexCount = view.getUint32(0, true);
    const triangleCount = view.getUint32(4, true);
    const expected = HEADER_BYTES + vertexCount * 12 + triangleCount * 12;
    if (buffer.byteLength !== expected) {
        throw new FrameError(
            `frame size mismatch: got ${buffer.byteLength}, need ${expected}`);
    }
    const positions = new Float32Array(vertexCount * 3);
    const indices = new Uint32Array(triangleCount * 3);
    let offset = HEADER_BYTES;
    for (let i = 0; i < positions.length; i++, offset += 4) {
        positions[i] = view.getFloat32(offset, true);
    }
    for (let i = 0; i < indices.length; i++, offset += 4) {
        indices[i] = view.getUint32(offset, true);
    }
    for (let i = 0; i < indices.length; i++) {
        if (indices[i] >= vertexCount) {
            throw new FrameError(
                `index ${indices[i]} out of range for ${vertexCount} vertices`);
        }
    }
    return { vertexCount, triangleCount, positions, indices };
}

/** Inverse of decodeFrame; used by tests and kept in sync with the server. */
export function encodeFrame(frame: MeshFrame): ArrayBuffer {
    const bytes = HEADER_BYTES + frame.positions.length * 4 + frame.indices.length * 4;
    const buffer = new ArrayBuffer(bytes);
    const view = new DataView(buffer);
    view.setUint32(0, frame.vertexCount, true);
    view.setUint32(4, frame.triangleCount, true);
    let offset = HEADER_BYTES;
    for (const value of frame.positions) {
        view.setFloat32(offset, value, true);
        offset += 4;
    }
    for (const value of frame.indices) {
        view.setUint32(offset, value, true);
        offset += 4;
    }
    return buffer;
}
