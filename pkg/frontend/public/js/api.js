/** Thin typed client over the screening service HTTP API. */
export class ApiError extends Error {
    status;
    constructor(status, message) {
        super(message);
        this.status = status;
    }
    /** 409s are tier-order guidance to show the operator verbatim. */
    get isTierOrder() {
        return this.status === 409;
    }
}
async function request(method, url, body, contentType) {
    const headers = {};
    if (contentType)
        headers["Content-Type"] = contentType;
    const resp = await fetch(url, { method, body, headers });
    const payload = (await resp.json());
    if (!resp.ok) {
        throw new ApiError(resp.status, payload.error ?? `HTTP ${resp.status}`);
    }
    return payload;
}
export class ScreeningApi {
    base;
    constructor(base) {
        this.base = base;
    }
    createSession() {
        return request("POST", `${this.base}/v1/sessions`);
    }
    getSession(id) {
        return request("GET", `${this.base}/v1/sessions/${id}`);
    }
    getEvents(id, since, waitSeconds = 0) {
        const wait = waitSeconds > 0 ? `&wait=${waitSeconds}` : "";
        return request("GET", `${this.base}/v1/sessions/${id}/events?since=${since}${wait}`);
    }
    capture(id, modality, blob) {
        return request("POST", `${this.base}/v1/sessions/${id}/capture/${modality}`, blob, "application/octet-stream");
    }
    getDiagnosis(id) {
        return request("GET", `${this.base}/v1/sessions/${id}/diagnosis`);
    }
    clearAlert(id) {
        return request("POST", `${this.base}/v1/sessions/${id}/clear`);
    }
}
