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

import type {
  CreateResult,
  DayResult,
  Envelope,
  ErrorBody,
  NetworkResult,
  ScenarioListResult,
  ServeResult,
  StateResult,
  WhatIfResult,
} from "./protocol.js";

export class ConnectionLost extends Error {
  constructor(cause: unknown) {
    super("could not reach the game server");
    this.name = "ConnectionLost";
    this.cause = cause;
  }
}

export class StaleSession extends Error {
  constructor(message: string) {
    super(message);
    this.name = "StaleSession";
  }
}

export class ProtocolFailure extends Error {
  readonly code: number;
  readonly kind: string;

  constructor(body: ErrorBody) {
    super(body.message);
    this.name = "ProtocolFailure";
    this.code = body.code;
    this.kind = body.kind;
  }
}

export type FetchLike = (input: string, init: RequestInit) => Promise<Response>;

export interface CreateOptions {
  mode?: "manual" | "simulated";
  scenario?: string | object;
  seed?: number;
  session?: string;
}

export class SessionClient {
  private readonly fetchFn: FetchLike;

  constructor(
    private readonly base: string = "",
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async rpc<R>(op: string, params: Record<string, unknown>): Promise<R> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.base}/v1/rpc`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ op, ...params }),
      });
    } catch (cause) {
      throw new ConnectionLost(cause);
    }
    let envelope: Envelope<R>;
    try {
      envelope = (await response.json()) as Envelope<R>;
    } catch (cause) {
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

  createSession(options: CreateOptions = {}): Promise<CreateResult> {
    return this.rpc<CreateResult>("create_session", { ...options });
  }

  state(session: string): Promise<StateResult> {
    return this.rpc<StateResult>("state", { session });
  }

  observe(session: string, outcome: string): Promise<DayResult> {
    return this.rpc<DayResult>("observe", { session, outcome });
  }

  nextDay(session: string): Promise<DayResult> {
    return this.rpc<DayResult>("next_day", { session });
  }

  serve(session: string, food: string): Promise<ServeResult> {
    return this.rpc<ServeResult>("serve", { session, food });
  }

  whatIf(session: string, suffix: string): Promise<WhatIfResult> {
    return this.rpc<WhatIfResult>("what_if", { session, suffix });
  }

  network(session: string): Promise<NetworkResult> {
    return this.rpc<NetworkResult>("network", { session });
  }

  reset(session: string): Promise<{ session: string; day_count: number }> {
    return this.rpc("reset", { session });
  }

  listScenarios(): Promise<ScenarioListResult> {
    return this.rpc<ScenarioListResult>("list_scenarios", {});
  }
}
