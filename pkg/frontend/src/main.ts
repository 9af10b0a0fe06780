/** Application wiring: session lifecycle, stream, controls, prompt box.
 *
 * The UI is stateless beyond the session id in the URL; a refresh restores
 * everything from the service.
 */

import { ApiError, ServiceClient, SessionState } from "./api.js";
import { PcgPane, toast } from "./pane.js";
import { ControlPanel } from "./panel.js";
import { SessionStream } from "./stream.js";
import { Viewport } from "./viewport.js";

const SAMPLE_PCG = `# four-legged table with a rounded top
input table_width: float = 2.0 range 0.5..4.0
input table_length: float = 2.0 range 0.5..4.0
input leg_height: float = 2.0 range 0.2..4.0
input leg_radius: float = 1.0 range 0.02..1.5
leg_span_x = subtract(table_width, 0.5)
leg_span_y = subtract(table_length, 0.5)
leg_corners = rectangle(leg_span_x, leg_span_y)
leg = cylinder(leg_radius, leg_height)
legs = instance_on_points(leg_corners, leg)
leg_drop = divide(leg_height, -2.0)
leg_offset = combine_xyz(z=leg_drop)
legs_placed = transform(legs, leg_offset)
top_profile = rectangle(table_width, table_length)
top_rounded = fillet(top_profile, 0.25, 20)
top_face = fill(top_rounded)
top = extrude(top_face, 1.0)
table = join(legs_placed, top)
output = table
`;

function el<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing #${id}`);
    return node as T;
}

class App {
    private client = new ServiceClient(
        (window as unknown as { PCG_SERVICE_URL?: string }).PCG_SERVICE_URL ??
        `${location.protocol}//${location.hostname}:8787`);
    private viewport = new Viewport(el<HTMLCanvasElement>("viewport"));
    private pane = new PcgPane(el("pcg-pane"));
    private panel = new ControlPanel(el("controls"), (name, value) => {
        this.sendParam(name, value);
    });
    private stream: SessionStream | null = null;
    private sessionId: string | null = null;
    private statusEl = el("status");

    constructor() {
        this.bindPromptBox();
        const fromUrl = new URLSearchParams(location.search).get("session");
        if (fromUrl) {
            this.attach(fromUrl).catch(() => {
                toast(`session ${fromUrl} not found`);
                this.createFromPcg(SAMPLE_PCG);
            });
        } else {
            this.createFromPcg(SAMPLE_PCG);
        }
    }

    private async createFromPcg(pcg: string): Promise<void> {
        try {
            const state = await this.client.createFromPcg(pcg);
            await this.adopt(state);
        } catch (error) {
            this.showRejection(error, pcg);
        }
    }

    private async attach(sessionId: string): Promise<void> {
        const state = await this.client.getState(sessionId);
        await this.adopt(state);
    }

    private async adopt(state: SessionState): Promise<void> {
        this.stream?.close();
        this.sessionId = state.session_id;
        const url = new URL(location.href);
        url.searchParams.set("session", state.session_id);
        history.replaceState(null, "", url);
        this.pane.show(state.pcg);
        this.panel.render(state.params);
        this.setStatus(state.revision);
        this.stream = new SessionStream(this.client.streamUrl(state.session_id), {
            onUpdate: (update) => {
                this.viewport.showFrame(update.frame);
                this.panel.update(update.params);
                this.setStatus(update.revision);
                this.refreshPane();
            },
            onBadFrame: (error) => toast(`bad mesh frame: ${error.message}`),
            onClose: () => toast("stream closed"),
        });
    }

    /** The text pane follows the service state, one revision behind at most. */
    private async refreshPane(): Promise<void> {
        if (!this.sessionId) return;
        try {
            const state = await this.client.getState(this.sessionId);
            this.pane.show(state.pcg);
        } catch {
            // transient; the next revision will retry
        }
    }

    private async sendParam(name: string, value: number | boolean): Promise<void> {
        if (!this.sessionId) return;
        try {
            await this.client.patchParam(this.sessionId, name, value);
        } catch (error) {
            this.showRejection(error, null);
        }
    }

    private bindPromptBox(): void {
        const input = el<HTMLInputElement>("prompt");
        const generate = el<HTMLButtonElement>("generate");
        const edit = el<HTMLButtonElement>("edit");
        const sync = () => {
            const empty = input.value.trim().length === 0;
            generate.disabled = empty;
            edit.disabled = empty || !this.sessionId;
        };
        input.addEventListener("input", sync);
        sync();
        generate.addEventListener("click", async () => {
            try {
                const state = await this.client.createFromInstruction(input.value);
                await this.adopt(state);
            } catch (error) {
                this.showRejection(error, null);
            }
        });
        edit.addEventListener("click", async () => {
            if (!this.sessionId) return;
            try {
                const state = await this.client.postEdit(this.sessionId, input.value);
                this.pane.show(state.pcg);
                this.panel.update(state.params);
                this.setStatus(state.revision);
            } catch (error) {
                // a failed edit leaves the session (and the mesh) untouched
                this.showRejection(error, null);
            }
        });
    }

    private async showRejection(error: unknown, source: string | null): Promise<void> {
        if (!(error instanceof ApiError)) {
            toast(String(error));
            return;
        }
        const detail = error.detail;
        toast(detail.message);
        if (detail.diagnostics?.length) {
            let shown = source;
            if (shown === null && this.sessionId) {
                const state = await this.client.getState(this.sessionId);
                shown = state.pcg;
            }
            this.pane.show(shown ?? "", detail.diagnostics);
        }
        if (detail.raw_response) {
            console.warn("model response:", detail.raw_response);
        }
    }

    private setStatus(revision: number): void {
        this.statusEl.textContent =
            this.sessionId ? `session ${this.sessionId} · revision ${revision}` : "";
    }
}

new App();
