/** Diagnostic rendering: verbatim messages tied to source line numbers. */

export interface Diagnostic {
    severity: string;
    line: number;
    code: string;
    message: string;
}

export interface RejectionDetail {
    message: string;
    diagnostics?: Diagnostic[];
    raw_response?: string | null;
}

export function formatDiagnostic(d: Diagnostic): string {
    return `${d.line}: ${d.severity}[${d.code}]: ${d.message}`;
}

export interface AnnotatedLine {
    lineNo: number; // 1-based
    text: string;
    diagnostics: Diagnostic[];
}

/** Pair every source line with the diagnostics that point at it. */
export function annotateSource(source: string,
                               diagnostics: Diagnostic[]): AnnotatedLine[] {
    const byLine = new Map<number, Diagnostic[]>();
    for (const d of diagnostics) {
        const bucket = byLine.get(d.line) ?? [];
        bucket.push(d);
        byLine.set(d.line, bucket);
    }
    return source.split("\n").map((text, i) => ({
        lineNo: i + 1,
        text,
        diagnostics: byLine.get(i + 1) ?? [],
    }));
}
