/** Control-binding logic: widget selection, bounds, clamping, debouncing.
 *
 * Kept DOM-free so it unit-tests without a browser; panel.ts owns the DOM.
 */

export type ParamType = "float" | "int" | "bool";

export interface ParamState {
    name: string;
    type: ParamType;
    default: number | boolean;
    range: [number, number] | null;
    value: number | boolean;
}

export type WidgetKind = "slider" | "checkbox" | "number";

/** Widget choice is a pure function of the parameter's type (and range). */
export function widgetKindFor(param: ParamState): WidgetKind {
    if (param.type === "bool") return "checkbox";
    return param.range ? "slider" : "number";
}

export interface SliderBounds {
    min: number;
    max: number;
    step: number;
}

/** Slider bounds equal the declared range exactly. */
export function sliderBounds(param: ParamState): SliderBounds {
    if (!param.range) {
        throw new Error(`parameter ${param.name} declares no range`);
    }
    const [min, max] = param.range;
    const step = param.type === "int" ? 1 : (max - min) / 200;
    return { min, max, step };
}

/** Values leaving the UI are always legal for the parameter. */
export function clampToRange(param: ParamState, raw: number): number {
    let value = param.type === "int" ? Math.round(raw) : raw;
    if (param.range) {
        value = Math.min(param.range[1], Math.max(param.range[0], value));
    }
    return value;
}

/** Trailing-edge debouncer: rapid slider motion sends one PATCH per window. */
export class Debouncer {
    private timer: ReturnType<typeof setTimeout> | null = null;
    private pending: (() => void) | null = null;

    constructor(readonly intervalMs: number) {}

    schedule(action: () => void): void {
        this.pending = action;
        if (this.timer === null) {
            this.timer = setTimeout(() => this.flush(), this.intervalMs);
        }
    }

    flush(): void {
        this.timer = null;
        const action = this.pending;
        this.pending = null;
        if (action) action();
    }

    cancel(): void {
        if (this.timer !== null) clearTimeout(this.timer);
        this.timer = null;
        this.pending = null;
    }
}

/** Drops stale revisions so rendering is latest-wins. */
export class RevisionGate {
    latest = -1;

    admit(revision: number): boolean {
        if (revision <= this.latest) return false;
        this.latest = revision;
        return true;
    }
}
