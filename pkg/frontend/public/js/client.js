/** Thin fetch client for the session protocol.
 *
 * Every call posts one envelope to /v1/rpc and awaits the response —
 * the dashboard performs no optimistic updates. Failures split into
 * three kinds the UI treats differently:
 *
 *   - ConnectionLost: the request never produced a response (offline,
 *     server down). The UI shows a retry banner.
 *   - StaleSession: the server answered 404 for the session id, e.g.
 *     after a service restart without a log directory. The UI offers to
 *     start a fresh session.
 *   - ProtocolFailure: any other error envelope (bad value, wrong
 *     mode, ...). The UI surfaces the server's message.
 */
export class ConnectionLost extends Error {
    constructor(cause) {
        super("could not reach the game server");
        this.name = "ConnectionLost";
        this.cause = cause;
    }
}
export class StaleSession extends Error {
    constructor(message) {
        super(message);
        this.name = "StaleSession";
    }
}
export class ProtocolFailure extends Error {
    code;
    kind;
    constructor(body) {
        super(body.message);
        this.name = "ProtocolFailure";
        this.code = body.code;
        this.kind = body.kind;
    }
}
export class SessionClient {
    base;
    fetchFn;
    constructor(base = "", fetchFn) {
        this.base = base;
        this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
    }
    async rpc(op, params) {
        let response;
        try {
            response = await this.fetchFn(`${this.base}/v1/rpc`, {
                method: "POST",
                headers: { "Content-Type": "application/json" },
                body: JSON.stringify({ op, ...params }),
            });
        }
        catch (cause) {
            throw new ConnectionLost(cause);
        }
        let envelope;
        try {
            envelope = (await response.json());
        }
        catch (cause) {
            throw new ConnectionLost(cause);
        }
        if (!envelope.ok) {
            if (envelope.error.code === 404) {
                throw new StaleSession(envelope.error.message);
            }
            throw new ProtocolFailure(envelope.error);
        }
        return envelope.result;
    }
    createSession(options = {}) {
        return this.rpc("create_session", { ...options });
    }
    state(session) {
        return this.rpc("state", { session });
    }
    observe(session, outcome) {
        return this.rpc("observe", { session, outcome });
    }
    nextDay(session) {
        return this.rpc("next_day", { session });
    }
    serve(session, food) {
        return this.rpc("serve", { session, food });
    }
    whatIf(session, suffix) {
        return this.rpc("what_if", { session, suffix });
    }
    network(session) {
        return this.rpc("network", { session });
    }
    reset(session) {
        return this.rpc("reset", { session });
    }
    listScenarios() {
        return this.rpc("list_scenarios", {});
    }
}
//# sourceMappingURL=client.js.map