/**
 * Long-poll event pump with resume-by-sequence.
 *
 * Every request asks for events after the last sequence number the reducer
 * accepted, so a dropped connection (or a response that overlaps already
 * seen events) can neither lose nor duplicate anything in the view: stale
 * events are filtered out before folding, and the strict reducer would
 * throw on a genuine gap.
 */
export class EventPump {
    api;
    sessionId;
    onEvents;
    options;
    stopped = false;
    lastSeq;
    constructor(api, sessionId, onEvents, startAfter = 0, options = {}) {
        this.api = api;
        this.sessionId = sessionId;
        this.onEvents = onEvents;
        this.options = options;
        this.lastSeq = startAfter;
    }
    get cursor() {
        return this.lastSeq;
    }
    stop() {
        this.stopped = true;
    }
    async run() {
        const wait = this.options.waitSeconds ?? 20;
        const retry = this.options.retryMs ?? 500;
        while (!this.stopped) {
            try {
                const batch = await this.api.getEvents(this.sessionId, this.lastSeq, wait);
                const fresh = batch.events.filter((e) => e.sequence > this.lastSeq);
                if (fresh.length > 0) {
                    this.lastSeq = fresh[fresh.length - 1].sequence;
                    this.onEvents(fresh);
                }
            }
            catch (err) {
                this.options.onError?.(err);
                await new Promise((resolve) => setTimeout(resolve, retry));
            }
        }
    }
}
