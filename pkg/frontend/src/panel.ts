/** Parameter panel: one widget per parameter, in declaration order. */

import {
    Debouncer,
    ParamState,
    clampToRange,
    sliderBounds,
    widgetKindFor,
} from "./controls.js";

export const SLIDER_DEBOUNCE_MS = 30;

export type ParamSender = (name: string, value: number | boolean) => void;

interface Row {
    param: ParamState;
    input: HTMLInputElement;
    valueLabel: HTMLSpanElement | null;
}

export class ControlPanel {
    private rows = new Map<string, Row>();
    private debouncers = new Map<string, Debouncer>();

    constructor(private root: HTMLElement, private send: ParamSender) {}

    render(params: ParamState[]): void {
        this.root.textContent = "";
        this.rows.clear();
        if (params.length === 0) {
            const hint = document.createElement("p");
            hint.className = "hint";
            hint.textContent = "This model declares no parameters.";
            this.root.appendChild(hint);
            return;
        }
        for (const param of params) {
            this.root.appendChild(this.buildRow(param));
        }
    }

    /** Reflect server state without re-emitting PATCHes. */
    update(params: ParamState[]): void {
        const known = params.every((p) => this.rows.has(p.name));
        if (!known || params.length !== this.rows.size) {
            this.render(params);
            return;
        }
        for (const param of params) {
            const row = this.rows.get(param.name)!;
            row.param = param;
            if (param.type === "bool") {
                row.input.checked = param.value as boolean;
            } else if (document.activeElement !== row.input) {
                row.input.value = String(param.value);
                row.valueLabel &&
                    (row.valueLabel.textContent = formatValue(param.value));
            }
        }
    }

    private buildRow(param: ParamState): HTMLElement {
        const row = document.createElement("label");
        row.className = "control-row";
        const name = document.createElement("span");
        name.className = "param-name";
        name.textContent = param.name;
        row.appendChild(name);

        const kind = widgetKindFor(param);
        const input = document.createElement("input");
        let valueLabel: HTMLSpanElement | null = null;
        if (kind === "checkbox") {
            input.type = "checkbox";
            input.checked = param.value as boolean;
            input.addEventListener("change", () => {
                this.dispatch(param, input.checked);
            });
        } else {
            if (kind === "slider") {
                const bounds = sliderBounds(param);
                input.type = "range";
                input.min = String(bounds.min);
                input.max = String(bounds.max);
                input.step = String(bounds.step);
            } else {
                input.type = "number";
                if (param.type === "int") input.step = "1";
            }
            input.value = String(param.value);
            valueLabel = document.createElement("span");
            valueLabel.className = "param-value";
            valueLabel.textContent = formatValue(param.value);
            input.addEventListener("input", () => {
                const value = clampToRange(param, Number(input.value));
                valueLabel!.textContent = formatValue(value);
                this.dispatch(param, value);
            });
        }
        input.dataset.param = param.name;
        row.appendChild(input);
        if (valueLabel) row.appendChild(valueLabel);
        this.rows.set(param.name, { param, input, valueLabel });
        return row;
    }

    private dispatch(param: ParamState, value: number | boolean): void {
        let debouncer = this.debouncers.get(param.name);
        if (!debouncer) {
            debouncer = new Debouncer(SLIDER_DEBOUNCE_MS);
            this.debouncers.set(param.name, debouncer);
        }
        debouncer.schedule(() => this.send(param.name, value));
    }
}

function formatValue(value: number | boolean): string {
    if (typeof value === "boolean") return value ? "on" : "off";
    return Number.isInteger(value) ? String(value) : value.toFixed(3);
}
