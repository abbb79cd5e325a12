/**
 * Session view model, derived purely by folding server events.
 *
 * The console invents no state: every number rendered traces back to an
 * event (or to the diagnosis endpoint, whose payload the diagnosis event
 * mirrors). Folding is strict about ordering - a gap or regression in
 * sequence numbers throws, which is what makes resume-by-sequence testable:
 * folding any chunking of the same event list must produce the same view.
 */
export const VITALS_BUFFER = 120;
export function initialView(sessionId) {
    return {
        sessionId,
        state: "MONITORING",
        lastSeq: 0,
        vitals: [],
        alert: null,
        confidences: {},
        diagnosis: null,
    };
}
function tier2Complete(view) {
    return view.confidences.voice !== undefined && view.confidences.face !== undefined;
}
/** Fold one event; returns a new view, never mutates the input. */
export function applyEvent(view, ev) {
    if (ev.sequence !== view.lastSeq + 1) {
        throw new Error(`event sequence ${ev.sequence} does not follow ${view.lastSeq}`);
    }
    const next = {
        ...view,
        vitals: view.vitals,
        confidences: { ...view.confidences },
        lastSeq: ev.sequence,
    };
    switch (ev.kind) {
        case "vitals": {
            const s = ev.payload.sample;
            const point = {
                seq: ev.sequence,
                timestampMs: s.timestamp_ms,
                systolic: s.systolic,
                heartRate: s.heart_rate,
                spo2: s.spo2,
            };
            next.vitals = [...view.vitals.slice(-(VITALS_BUFFER - 1)), point];
            break;
        }
        case "alert":
            next.alert = { reason: String(ev.payload.reason), seq: ev.sequence };
            next.state = "ALERT";
            break;
        case "clear":
            next.alert = null;
            next.state = "MONITORING";
            break;
        case "capture":
            if (view.state === "ALERT" && ev.payload.modality !== "retina") {
                next.state = "TIER2_PENDING";
            }
            break;
        case "confidence": {
            const modality = String(ev.payload.modality);
            next.confidences[modality] = Number(ev.payload.value);
            if ((next.state === "ALERT" || next.state === "TIER2_PENDING") &&
                tier2Complete(next)) {
                next.state = "TIER3_PENDING";
            }
            break;
        }
        case "diagnosis":
            next.diagnosis = ev.payload;
            next.state = "DIAGNOSED";
            break;
    }
    return next;
}
export function reduceEvents(view, events) {
    let out = view;
    for (const ev of events) {
        out = applyEvent(out, ev);
    }
    return out;
}
export function tierOf(state) {
    switch (state) {
        case "MONITORING":
            return 1;
        case "ALERT":
        case "TIER2_PENDING":
            return 2;
        default:
            return 3;
    }
}
