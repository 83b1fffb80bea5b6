/** Unit behavior of the pure view renderers. */

import { describe, expect, it } from "vitest";

import type { HistoryDay, ServeResult, StateResult, WhatIfResult } from "../src/protocol";
import {
  escapeHtml,
  probabilityText,
  renderBars,
  renderFoodButtons,
  renderHistory,
  renderOutcome,
  renderProtocolBanner,
  renderRetryBanner,
  renderStaleBanner,
  renderToday,
  renderWhatIf,
} from "../src/views";
import { okResult } from "./helpers";

describe("escapeHtml", () => {
  it("neutralises markup characters", () => {
    expect(escapeHtml(`<b>"fish" & chips</b>`)).toBe(
      "&lt;b&gt;&quot;fish&quot; &amp; chips&lt;/b&gt;",
    );
  });

  it("leaves fraction and decimal strings untouched", () => {
    expect(escapeHtml("16/17")).toBe("16/17");
    expect(escapeHtml("0.941176")).toBe("0.941176");
  });
});

describe("probabilityText", () => {
  it("shows the fraction and the decimal side by side, verbatim", () => {
    const html = probabilityText({ fraction: "16/17", decimal: "0.941176" });
    expect(html).toContain(`<b class="frac">16/17</b>`);
    expect(html).toContain(`<span class="dec">= 0.941176</span>`);
  });
});

describe("renderBars", () => {
  it("uses the decimal only for bar geometry, clamped to [0,100]", () => {
    const html = renderBars(
      "test",
      {
        a: { fraction: "1/2", decimal: "0.5" },
        b: { fraction: "9/1", decimal: "9" },
        c: { fraction: "0/1", decimal: "junk" },
      },
      "posterior",
    );
    expect(html).toContain("width:50.00%");
    expect(html).toContain("width:100.00%");
    expect(html).toContain("width:0.00%");
  });

  it("escapes labels", () => {
    const html = renderBars(
      "test",
      { "<x>": { fraction: "1/1", decimal: "1" } },
      "posterior",
    );
    expect(html).toContain("&lt;x&gt;");
    expect(html).not.toContain("<x>");
  });
});

describe("renderToday", () => {
  it("shows the latest hat and the full run of hats", () => {
    const state = okResult<StateResult>("state_after_nnnn");
    const html = renderToday(state);
    expect(html).toContain("Day 4");
    expect(html).toContain(">NNNN</code>");
    expect(html).toContain(`class="hat hat-N"`);
    expect(html).not.toContain("choose what to serve");
  });

  it("flags an open day that still needs a serving decision", () => {
    const state = okResult<StateResult>("state_day_open");
    const html = renderToday(state);
    expect(html).toContain("choose what to serve");
  });

  it("handles the empty session", () => {
    const state = okResult<StateResult>("state_fresh");
    const html = renderToday(state);
    expect(html).toContain("Day 0");
    expect(html).toContain("(none)");
  });
});

describe("renderHistory", () => {
  it("marks served days as happy or angry from the payload alone", () => {
    const state = okResult<StateResult>("state_simulated");
    const html = renderHistory(state.history);
    expect(html).toContain(`class="served angry"`);
    expect(html).toContain("Sweet ✗");
    expect(html).toContain(`class="served happy"`);
    expect(html).toContain("Salty ✓");
  });

  it("shows observation-only days without a serving chip", () => {
    const days: HistoryDay[] = [{ day: 1, hat: "V", served: null, angry: null }];
    const html = renderHistory(days);
    expect(html).toContain(`class="hat hat-V"`);
    expect(html).not.toContain("served");
  });

  it("renders an explicit empty marker before any days", () => {
    expect(renderHistory([])).toContain("no days yet");
  });
});

describe("renderOutcome", () => {
  it("renders an angry banner from the serve payload", () => {
    const outcome = okResult<ServeResult>("serve_day_one");
    const html = renderOutcome(outcome);
    expect(html).toContain("outcome angry");
    expect(html).toContain("she stormed off angry");
    expect(html).toContain("1 angry of 1 served");
  });

  it("renders a satisfied banner from the serve payload", () => {
    const outcome = okResult<ServeResult>("serve_day_two");
    const html = renderOutcome(outcome);
    expect(html).toContain("outcome happy");
    expect(html).toContain("she left satisfied");
    expect(html).toContain("1 angry of 2 served");
  });
});

describe("renderFoodButtons", () => {
  it("offers one button per food, enabled only while a day is open", () => {
    const enabled = renderFoodButtons(["Sweet", "Salty"], true);
    expect(enabled.match(/data-action="serve"/g) ?? []).toHaveLength(2);
    expect(enabled).toContain(`data-food="Sweet"`);
    expect(enabled).toContain(`data-food="Salty"`);
    expect(enabled).not.toContain("disabled");

    const disabled = renderFoodButtons(["Sweet", "Salty"], false);
    expect(disabled.match(/ disabled/g) ?? []).toHaveLength(2);
  });
});

describe("renderWhatIf", () => {
  it("describes the hypothetical run and keeps taste optional", () => {
    const result = okResult<WhatIfResult>("what_if_two_v");
    const html = renderWhatIf(result);
    expect(html).toContain("After 6 days");
    expect(html).toContain("suffix VV");
    expect(html).toContain(">4/5</b>");
    expect(html).toContain("= 0.8");

    const bare: WhatIfResult = {
      session: "s1",
      suffix: [],
      day_count: 0,
      posterior: { a: { fraction: "1/2", decimal: "0.5" } },
      predictive: { a: { fraction: "1/2", decimal: "0.5" } },
    };
    const bareHtml = renderWhatIf(bare);
    expect(bareHtml).toContain("suffix —");
    expect(bareHtml).not.toContain("Taste after that run");
  });
});

describe("failure banners", () => {
  it("connection loss offers a retry", () => {
    const html = renderRetryBanner("could not reach the game server");
    expect(html).toContain("Connection lost");
    expect(html).toContain(`data-action="retry"`);
  });

  it("a stale session offers to start over", () => {
    const html = renderStaleBanner("no session 's1'");
    expect(html).toContain("This session is gone");
    expect(html).toContain(`data-action="recreate"`);
    expect(html).toContain("no session 's1'");
  });

  it("protocol failures surface the server's message, escaped", () => {
    const html = renderProtocolBanner(`unknown outcome '<Q>'`);
    expect(html).toContain("unknown outcome '&lt;Q&gt;'");
  });
});
