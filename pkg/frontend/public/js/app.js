/**
 * Console wiring: one page, one live session.
 *
 * The operator attaches to (or creates) a session, watches the vitals chart
 * until the tier-1 alert fires, uploads the tier-2/3 captures, and reads the
 * diagnosis. All rendered numbers come from server events; the diagnosis
 * panel re-reads GET /diagnosis so its figures are exactly the service's.
 */
import { ApiError, ScreeningApi } from "./api.js";
import { drawVitalsChart } from "./chart.js";
import { EventPump } from "./events.js";
import { applyEvent, initialView, tierOf } from "./state.js";
const $ = (id) => {
    const el = document.getElementById(id);
    if (!el)
        throw new Error(`missing element #${id}`);
    return el;
};
const MODALITY_LABELS = {
    voice: "voice",
    face: "face",
    retina: "retina",
    vascular: "vascular",
};
class ConsoleApp {
    api;
    view = null;
    pump = null;
    constructor() {
        this.api = new ScreeningApi($("server-url").value);
        $("btn-create").onclick = () => void this.createSession();
        $("btn-attach").onclick = () => void this.attach();
        $("btn-clear").onclick = () => void this.clearAlert();
        ["voice", "face", "retina"].forEach((m) => {
            $(`btn-upload-${m}`).onclick = () => void this.upload(m);
        });
    }
    status(text, isError = false) {
        const el = $("status-line");
        el.textContent = text;
        el.className = isError ? "status error" : "status";
    }
    async createSession() {
        this.api = new ScreeningApi($("server-url").value);
        try {
            const summary = await this.api.createSession();
            $("session-id").value = summary.session_id;
            await this.attach();
        }
        catch (err) {
            this.status(`create failed: ${err.message}`, true);
        }
    }
    async attach() {
        this.pump?.stop();
        this.api = new ScreeningApi($("server-url").value);
        const sid = $("session-id").value.trim();
        if (!sid) {
            this.status("enter or create a session id first", true);
            return;
        }
        try {
            await this.api.getSession(sid);
        }
        catch (err) {
            this.status(`attach failed: ${err.message}`, true);
            return;
        }
        this.view = initialView(sid);
        this.render();
        this.pump = new EventPump(this.api, sid, (events) => this.onEvents(events), 0, { onError: () => this.status("connection lost; retrying…", true) });
        void this.pump.run();
        this.status(`attached to session ${sid}`);
    }
    onEvents(events) {
        if (!this.view)
            return;
        for (const ev of events) {
            this.view = applyEvent(this.view, ev);
            if (ev.kind === "diagnosis")
                void this.showDiagnosis();
        }
        this.render();
    }
    async upload(modality) {
        if (!this.view)
            return;
        const input = $(`file-${modality}`);
        const file = input.files?.[0];
        if (!file) {
            this.status(`choose a ${modality} file first`, true);
            return;
        }
        try {
            const result = await this.api.capture(this.view.sessionId, modality, await file.arrayBuffer());
            this.status(`${modality} confidence ${(result.confidence * 100).toFixed(1)}% (state ${result.state})`);
        }
        catch (err) {
            if (err instanceof ApiError && err.isTierOrder) {
                this.status(`not yet: ${err.message}`, true);
            }
            else {
                this.status(`${modality} upload failed: ${err.message}`, true);
            }
        }
    }
    async clearAlert() {
        if (!this.view)
            return;
        try {
            await this.api.clearAlert(this.view.sessionId);
            this.status("alert cleared");
        }
        catch (err) {
            this.status(err.message, true);
        }
    }
    async showDiagnosis() {
        if (!this.view)
            return;
        // render exactly what the service reports, not a local recomputation
        const d = await this.api.getDiagnosis(this.view.sessionId);
        renderDiagnosis(d);
    }
    render() {
        const view = this.view;
        if (!view)
            return;
        drawVitalsChart($("vitals-chart"), view.vitals);
        const banner = $("alert-banner");
        if (view.alert) {
            banner.hidden = false;
            banner.textContent = `TIER-1 ALERT — criterion: ${view.alert.reason}`;
        }
        else {
            banner.hidden = true;
        }
        $("session-state").textContent = view.state;
        const tier = tierOf(view.state);
        for (const t of [1, 2, 3]) {
            $(`tier-${t}`).className = "tier" + (t === tier ? " active" : t < tier ? " done" : "");
        }
        for (const [modality, label] of Object.entries(MODALITY_LABELS)) {
            const value = view.confidences[modality];
            const bar = $(`gauge-${label}`);
            const pct = value === undefined ? 0 : Math.round(value * 100);
            bar.style.width = `${pct}%`;
            $(`gauge-${label}-text`).textContent =
                value === undefined ? "—" : `${(value * 100).toFixed(1)}%`;
        }
    }
}
export function renderDiagnosis(d) {
    $("diagnosis-panel").hidden = false;
    $("risk-value").textContent = `${d.risk_percent.toFixed(2)}%`;
    $("risk-fill").style.width = `${Math.min(100, Math.max(0, d.risk_percent))}%`;
    $("risk-verdict").textContent = d.at_risk ? "AT RISK" : "not at risk";
    $("risk-verdict").className = d.at_risk ? "verdict bad" : "verdict ok";
    const rows = ["vocal", "vascular", "retina", "face"].map((name, i) => `<tr><td>${name}${d.imputed.includes(name) ? " (imputed)" : ""}</td>` +
        `<td>${d.contributions[i]?.toFixed(4) ?? "?"}</td></tr>`);
    $("contribution-rows").innerHTML = rows.join("");
    $("model-version").textContent = d.model_version;
}
new ConsoleApp();
