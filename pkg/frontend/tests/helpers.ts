/** Fixture access for the contract tests.
 *
 * payloads.json is captured from the real inference server by
 * scripts/capture_fixtures.py — regenerate it there, never edit it by
 * hand, or the verbatim-rendering guarantees become circular.
 */

import rawPayloads from "./fixtures/payloads.json";
import type { ErrorBody, ProbabilityText } from "../src/protocol";

export interface Fixture {
  readonly status: number;
  readonly envelope: {
    readonly ok: boolean;
    readonly format: number;
    readonly result?: unknown;
    readonly error?: ErrorBody;
  };
}

export const fixtures = rawPayloads as unknown as Readonly<Record<string, Fixture>>;

export function fixture(name: string): Fixture {
  const found = fixtures[name];
  if (!found) {
    throw new Error(`no fixture named ${name}; run scripts/capture_fixtures.py`);
  }
  return found;
}

export function okResult<T>(name: string): T {
  const { envelope } = fixture(name);
  if (!envelope.ok) {
    throw new Error(`fixture ${name} is an error envelope`);
  }
  return envelope.result as T;
}

export function errorBody(name: string): ErrorBody {
  const { envelope } = fixture(name);
  if (envelope.ok || !envelope.error) {
    throw new Error(`fixture ${name} is not an error envelope`);
  }
  return envelope.error;
}

/** The fixture's JSON text — the ground truth for verbatim checks. */
export function fixtureText(name: string): string {
  return JSON.stringify(fixture(name).envelope);
}

/** Every {fraction, decimal} pair anywhere in a payload. */
export function collectProbabilityTexts(value: unknown): ProbabilityText[] {
  const found: ProbabilityText[] = [];
  const walk = (node: unknown): void => {
    if (Array.isArray(node)) {
      node.forEach(walk);
      return;
    }
    if (node && typeof node === "object") {
      const record = node as Record<string, unknown>;
      if (typeof record["fraction"] === "string" && typeof record["decimal"] === "string") {
        found.push({
          fraction: record["fraction"] as string,
          decimal: record["decimal"] as string,
        });
      }
      Object.values(record).forEach(walk);
    }
  };
  walk(value);
  return found;
}
