/** Envelope and payload shapes of the session service's JSON protocol.
 *
 * These mirror the server's responses one to one. The dashboard never
 * computes a probability: every `ProbabilityText` pair below arrives
 * from the server and is rendered verbatim.
 */

/** A probability as the server states it: exact fraction plus decimal. */
export interface ProbabilityText {
  readonly fraction: string;
  readonly decimal: string;
}

export type ProbabilityMap = Readonly<Record<string, ProbabilityText>>;

export interface ErrorBody {
  readonly code: number;
  readonly kind: string;
  readonly message: string;
}

export interface OkEnvelope<R> {
  readonly ok: true;
  readonly format: number;
  readonly result: R;
}

export interface ErrorEnvelope {
  readonly ok: false;
  readonly format: number;
  readonly error: ErrorBody;
}

export type Envelope<R> = OkEnvelope<R> | ErrorEnvelope;

export interface CreateResult {
  readonly session: string;
  readonly mode: "manual" | "simulated";
  readonly scenario: string;
  readonly day_count: number;
}

export interface HistoryDay {
  readonly day: number;
  readonly hat: string;
  readonly served: string | null;
  readonly angry: boolean | null;
}

export interface StrategyReport {
  readonly choices: Readonly<Record<string, Record<string, string>>>;
  readonly per_hat: ProbabilityMap;
  readonly marginal: ProbabilityText;
}

export interface ChessboardCell {
  readonly size: number;
  readonly counts: Readonly<Record<string, number>>;
  readonly satisfied: number;
  readonly angry: number;
}

export interface StateResult {
  readonly session: string;
  readonly mode: "manual" | "simulated";
  readonly scenario: string;
  readonly day_count: number;
  readonly hats_seen: string;
  readonly history: readonly HistoryDay[];
  readonly open_day: number | null;
  readonly posterior: ProbabilityMap;
  readonly predictive: ProbabilityMap;
  readonly taste_predictive?: ProbabilityMap;
  readonly recommended?: Readonly<Record<string, string>>;
  readonly strategies?: Readonly<Record<string, StrategyReport>>;
  readonly chessboard?: Readonly<Record<string, ChessboardCell>>;
}

export interface DayResult {
  readonly session: string;
  readonly day: number;
  readonly hat: string;
  readonly posterior: ProbabilityMap;
  readonly predictive: ProbabilityMap;
  readonly recommended?: Readonly<Record<string, string>>;
}

export interface ServeResult {
  readonly session: string;
  readonly day: number;
  readonly served: string;
  readonly angry: boolean;
  readonly served_total: number;
  readonly angry_total: number;
}

export interface WhatIfResult {
  readonly session: string;
  readonly suffix: readonly string[];
  readonly day_count: number;
  readonly posterior: ProbabilityMap;
  readonly predictive: ProbabilityMap;
  readonly taste_predictive?: ProbabilityMap;
}

export interface DiagramNode {
  readonly id: string;
  readonly label: string;
  readonly layer: string;
  readonly annotation: string | null;
  readonly observed: boolean;
}

export interface DiagramEdge {
  readonly source: string;
  readonly target: string;
  readonly probability: string;
  readonly weight_class: number;
}

export interface Diagram {
  readonly format: number;
  readonly nodes: readonly DiagramNode[];
  readonly edges: readonly DiagramEdge[];
}

export interface NetworkResult {
  readonly session: string;
  readonly diagram: Diagram;
}

export interface ScenarioListResult {
  readonly scenarios: readonly string[];
}
