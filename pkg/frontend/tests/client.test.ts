/** SessionClient behavior against a scripted fetch. */

import { describe, expect, it } from "vitest";

import {
  ConnectionLost,
  ProtocolFailure,
  SessionClient,
  StaleSession,
  type FetchLike,
} from "../src/client";
import type { CreateResult, StateResult } from "../src/protocol";
import { errorBody, fixture, okResult } from "./helpers";

interface Recorded {
  url: string;
  body: unknown;
}

function scripted(
  name: string,
  recorder?: Recorded[],
): FetchLike {
  const { status, envelope } = fixture(name);
  return async (url, init) => {
    recorder?.push({ url, body: JSON.parse(String(init.body)) });
    return new Response(JSON.stringify(envelope), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  };
}

describe("SessionClient", () => {
  it("posts one flat envelope and unwraps the result", async () => {
    const calls: Recorded[] = [];
    const client = new SessionClient("", scripted("create_manual", calls));
    const created = await client.createSession({ scenario: "witches", mode: "manual" });
    expect(created).toEqual(okResult<CreateResult>("create_manual"));
    expect(calls).toEqual([
      {
        url: "/v1/rpc",
        body: { op: "create_session", scenario: "witches", mode: "manual" },
      },
    ]);
  });

  it("prefixes the configured base URL", async () => {
    const calls: Recorded[] = [];
    const client = new SessionClient("http://127.0.0.1:8377", scripted("state_fresh", calls));
    await client.state("s1");
    expect(calls[0]?.url).toBe("http://127.0.0.1:8377/v1/rpc");
    expect(calls[0]?.body).toEqual({ op: "state", session: "s1" });
  });

  it("passes a state payload through untouched", async () => {
    const client = new SessionClient("", scripted("state_after_nnnn"));
    const state = await client.state("s1");
    expect(state).toEqual(okResult<StateResult>("state_after_nnnn"));
    expect(state.posterior["V7"]?.fraction).toBe("16/17");
    expect(state.posterior["V7"]?.decimal).toBe("0.941176");
  });

  it("sends what_if with the suffix text", async () => {
    const calls: Recorded[] = [];
    const client = new SessionClient("", scripted("what_if_ten_violet", calls));
    const result = await client.whatIf("s2", "VVVVVVVVVV");
    expect(calls[0]?.body).toEqual({ op: "what_if", session: "s2", suffix: "VVVVVVVVVV" });
    expect(result.predictive["V"]?.decimal).toBe("0.666341");
  });

  it("turns a 404 envelope into StaleSession with the server's words", async () => {
    const client = new SessionClient("", scripted("error_missing_session"));
    const failure = await client.state("ghost").catch((error: unknown) => error);
    expect(failure).toBeInstanceOf(StaleSession);
    expect((failure as StaleSession).message).toBe(errorBody("error_missing_session").message);
  });

  it("keeps code and kind on other protocol failures", async () => {
    const client = new SessionClient("", scripted("error_nothing_to_serve"));
    const failure = await client.serve("s1", "Sweet").catch((error: unknown) => error);
    expect(failure).toBeInstanceOf(ProtocolFailure);
    const typed = failure as ProtocolFailure;
    expect(typed.code).toBe(409);
    expect(typed.kind).toBe("WrongMode");
    expect(typed.message).toBe(errorBody("error_nothing_to_serve").message);
  });

  it("classifies a 422 label rejection as a protocol failure too", async () => {
    const client = new SessionClient("", scripted("error_unknown_outcome"));
    const failure = await client.observe("s1", "Q").catch((error: unknown) => error);
    expect(failure).toBeInstanceOf(ProtocolFailure);
    expect((failure as ProtocolFailure).kind).toBe("UnknownLabel");
  });

  it("reports a rejected fetch as ConnectionLost", async () => {
    const down: FetchLike = async () => {
      throw new TypeError("fetch failed");
    };
    const client = new SessionClient("", down);
    const failure = await client.state("s1").catch((error: unknown) => error);
    expect(failure).toBeInstanceOf(ConnectionLost);
  });

  it("reports a non-JSON response as ConnectionLost", async () => {
    const garbled: FetchLike = async () =>
      new Response("<html>proxy error</html>", {
        status: 200,
        headers: { "Content-Type": "text/html" },
      });
    const client = new SessionClient("", garbled);
    const failure = await client.state("s1").catch((error: unknown) => error);
    expect(failure).toBeInstanceOf(ConnectionLost);
  });
});
