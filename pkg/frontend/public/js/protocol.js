/** Envelope and payload shapes of the session service's JSON protocol.
 *
 * These mirror the server's responses one to one. The dashboard never
 * computes a probability: every `ProbabilityText` pair below arrives
 * from the server and is rendered verbatim.
 */
export {};
//# sourceMappingURL=protocol.js.map