/** PCG text pane with inline diagnostics, plus a transient toast. */

import { AnnotatedLine, Diagnostic, annotateSource, formatDiagnostic } from "./diagnostics.js";

export class PcgPane {
    constructor(private root: HTMLElement) {}

    show(source: string, diagnostics: Diagnostic[] = []): void {
        this.root.textContent = "";
        const lines: AnnotatedLine[] = annotateSource(source, diagnostics);
        for (const line of lines) {
            const row = document.createElement("div");
            row.className = "pcg-line" + (line.diagnostics.length ? " has-error" : "");
            const no = document.createElement("span");
            no.className = "line-no";
            no.textContent = String(line.lineNo);
            const text = document.createElement("span");
            text.className = "line-text";
            text.textContent = line.text;
            row.append(no, text);
            this.root.appendChild(row);
            for (const diagnostic of line.diagnostics) {
                const note = document.createElement("div");
                note.className = "pcg-diagnostic";
                note.textContent = formatDiagnostic(diagnostic);
                this.root.appendChild(note);
            }
        }
    }
}

export function toast(message: string): void {
    const el = document.createElement("div");
    el.className = "toast";
    el.textContent = message;
    document.body.appendChild(el);
    setTimeout(() => el.remove(), 4000);
}
