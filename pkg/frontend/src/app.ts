/** Browser entry point: one session per tab, server-authoritative.
 *
 * Every click round-trips to the server and the screen is rebuilt from
 * the fresh state payload — there is no optimistic rendering and no
 * client-side probability arithmetic anywhere.
 */

import { ConnectionLost, SessionClient, StaleSession, ProtocolFailure } from "./client.js";
import type { ServeResult, StateResult } from "./protocol.js";
import {
  renderChessboard,
  renderFoodButtons,
  renderHistory,
  renderNetwork,
  renderOutcome,
  renderPosterior,
  renderPredictive,
  renderProtocolBanner,
  renderRetryBanner,
  renderStaleBanner,
  renderStrategies,
  renderToday,
  renderWhatIf,
} from "./views.js";

interface Mounts {
  readonly banner: HTMLElement;
  readonly today: HTMLElement;
  readonly beliefs: HTMLElement;
  readonly history: HTMLElement;
  readonly strategies: HTMLElement;
  readonly boards: HTMLElement;
  readonly network: HTMLElement;
  readonly whatif: HTMLElement;
}

function mount(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing mount point #${id}`);
  }
  return el;
}

export class App {
  private readonly client: SessionClient;
  private readonly mounts: Mounts;
  private session: string | null = null;
  private lastOutcome: ServeResult | null = null;

  constructor(client: SessionClient, mounts: Mounts) {
    this.client = client;
    this.mounts = mounts;
  }

  async boot(): Promise<void> {
    await this.guard(async () => {
      const created = await this.client.createSession({
        scenario: "witches",
        mode: "simulated",
        seed: Date.now() >>> 0,
      });
      this.session = created.session;
      await this.refresh();
    });
  }

  private async refresh(): Promise<void> {
    if (!this.session) {
      return;
    }
    const state = await this.client.state(this.session);
    const network = await this.client.network(this.session);
    this.renderState(state);
    this.mounts.network.innerHTML = renderNetwork(network.diagram);
  }

  private renderState(state: StateResult): void {
    const foods = Object.keys(state.taste_predictive ?? {});
    const canServe = state.open_day !== null;
    this.mounts.today.innerHTML =
      renderToday(state) +
      `<button type="button" data-action="next-day"${canServe ? " disabled" : ""}>Next day</button>` +
      renderFoodButtons(foods, canServe);
    this.mounts.beliefs.innerHTML = renderPosterior(state) + renderPredictive(state);
    this.mounts.history.innerHTML =
      (this.lastOutcome ? renderOutcome(this.lastOutcome) : "") + renderHistory(state.history);
    this.mounts.strategies.innerHTML = state.strategies
      ? renderStrategies(state.strategies, state.recommended)
      : "";
    this.mounts.boards.innerHTML = state.chessboard
      ? Object.entries(state.chessboard)
          .map(([hat, cell]) => renderChessboard(hat, cell))
          .join("")
      : "";
  }

  async nextDay(): Promise<void> {
    await this.guard(async () => {
      if (!this.session) {
        return;
      }
      this.lastOutcome = null;
      await this.client.nextDay(this.session);
      await this.refresh();
    });
  }

  async serve(food: string): Promise<void> {
    await this.guard(async () => {
      if (!this.session) {
        return;
      }
      this.lastOutcome = await this.client.serve(this.session, food);
      await this.refresh();
    });
  }

  async whatIf(suffixText: string): Promise<void> {
    await this.guard(async () => {
      if (!this.session) {
        return;
      }
      const result = await this.client.whatIf(this.session, suffixText.trim());
      this.mounts.whatif.innerHTML = renderWhatIf(result);
    });
  }

  /** Route transport failures into banners instead of dead screens. */
  private async guard(action: () => Promise<void>): Promise<void> {
    try {
      this.mounts.banner.innerHTML = "";
      await action();
    } catch (error) {
      if (error instanceof ConnectionLost) {
        this.mounts.banner.innerHTML = renderRetryBanner(error.message);
      } else if (error instanceof StaleSession) {
        this.session = null;
        this.mounts.banner.innerHTML = renderStaleBanner(error.message);
      } else if (error instanceof ProtocolFailure) {
        this.mounts.banner.innerHTML = renderProtocolBanner(error.message);
      } else {
        throw error;
      }
    }
  }

  wire(root: HTMLElement): void {
    root.addEventListener("click", (event) => {
      const target = event.target as HTMLElement | null;
      const button = target?.closest<HTMLButtonElement>("button[data-action]");
      if (!button || button.disabled) {
        return;
      }
      switch (button.dataset["action"]) {
        case "next-day":
          void this.nextDay();
          break;
        case "serve":
          void this.serve(button.dataset["food"] ?? "");
          break;
        case "retry":
          void (this.session ? this.guard(() => this.refresh()) : this.boot());
          break;
        case "recreate":
          void this.boot();
          break;
        case "what-if": {
          const input = root.querySelector<HTMLInputElement>("#whatif-input");
          void this.whatIf(input?.value ?? "");
          break;
        }
        default:
          break;
      }
    });
  }
}

function main(): void {
  const app = new App(new SessionClient(), {
    banner: mount("banner"),
    today: mount("today"),
    beliefs: mount("beliefs"),
    history: mount("history"),
    strategies: mount("strategies"),
    boards: mount("boards"),
    network: mount("network"),
    whatif: mount("whatif"),
  });
  app.wire(document.body);
  void app.boot();
}

if (typeof document !== "undefined" && document.getElementById("today")) {
  main();
}
