import { ApiClient, ApiError } from "./api.js";
import { clear, el } from "./dom.js";
import { EventFeed } from "./events.js";
import { renderCandidateGrid } from "./grid.js";
import { renderSceneTable } from "./scene.js";
import { SelectionDraft } from "./selection.js";
import { renderTimeline } from "./timeline.js";
import type { Session, SessionEvent } from "./types.js";

export interface AppOptions {
  autoPoll?: boolean;
  pollIntervalMs?: number;
}

// The whole client: one session per page, session id in the URL hash,
// no routing beyond that.
export class App {
  session: Session | undefined;
  draft: SelectionDraft | undefined;
  feed: EventFeed | undefined;
  private thumbnails = new Map<string, string>();
  private header: HTMLElement;
  private bannerBox: HTMLElement;
  private main: HTMLElement;
  private timelineBox: HTMLElement;
  private scenesBox: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly client: ApiClient,
    private readonly options: AppOptions = {},
  ) {
    this.header = el("header", { class: "app-header" });
    this.bannerBox = el("div", { class: "banners" });
    this.main = el("main", { class: "app-main" });
    this.timelineBox = el("section", { class: "timeline-box" });
    this.scenesBox = el("section", { class: "scenes-box" });
    root.append(this.header, this.bannerBox, this.main, this.timelineBox, this.scenesBox);
  }

  async boot(): Promise<void> {
    const id = window.location.hash.replace(/^#/, "");
    if (id === "") this.renderCreateForm();
    else await this.openSession(id);
  }

  // -- create form ------------------------------------------------------------

  private renderCreateForm(): void {
    clear(this.main);
    const prompt = el("textarea", { class: "prompt-input", placeholder: "Describe the scene" });
    const count = el("input", { class: "count-input", type: "number", value: "4", min: "1", max: "16" });
    const start = el("button", { class: "create-button", type: "button" }, ["Generate candidates"]);
    start.addEventListener("click", () => {
      void this.create((prompt as HTMLTextAreaElement).value, Number((count as HTMLInputElement).value));
    });
    this.main.append(el("div", { class: "create-form" }, [prompt, count, start]));
  }

  async create(prompt: string, n: number): Promise<void> {
    try {
      const session = await this.client.createSession(prompt, n);
      window.location.hash = `#${session.id}`;
      await this.openSession(session.id);
    } catch (err) {
      this.showError(err);
    }
  }

  // -- session view -----------------------------------------------------------

  async openSession(id: string): Promise<void> {
    try {
      this.session = await this.client.getSession(id);
    } catch (err) {
      this.showError(err);
      return;
    }
    this.feed = new EventFeed(this.client, id, (fresh) => this.onEvents(fresh));
    if (this.options.autoPoll !== false) this.feed.start(this.options.pollIntervalMs ?? 1000);
    await this.refreshEvents();
    if (this.session.loop.status === "collecting") await this.loadRound();
    else await this.renderFinal();
  }

  async refreshEvents(): Promise<void> {
    if (this.feed) await this.feed.pollOnce();
  }

  private onEvents(fresh: SessionEvent[]): void {
    clear(this.timelineBox);
    if (this.feed) this.timelineBox.append(renderTimeline(this.feed.events));
    for (const event of fresh) {
      if (event.event === "escalation") {
        this.showBanner(
          "action-required",
          `Action required for ${event.candidate_id}, step ${event.step_index + 1}: ${event.message}`,
        );
      }
    }
    if (this.feed?.done) this.feed.stop();
  }

  private async loadRound(): Promise<void> {
    const session = this.session!;
    const cset = await this.client.getCandidates(session.id);
    this.thumbnails = new Map();
    for (const candidate of cset.candidates) {
      this.thumbnails.set(
        candidate.id,
        await this.client.getThumbnail(session.id, candidate.id),
      );
    }
    if (this.draft) this.draft.adoptCandidates(cset.candidates);
    else this.draft = new SelectionDraft(cset.candidates);
    this.session = await this.client.getSession(session.id);
    this.renderRound();
  }

  private renderRound(): void {
    const session = this.session!;
    const draft = this.draft!;
    clear(this.header);
    this.header.append(
      el("h1", {}, [session.prompt]),
      el("p", { class: "status-line" }, [
        `Round ${session.loop.round} of candidate selection (stage: ${session.conversation.stage})`,
      ]),
    );
    clear(this.main);
    this.main.append(
      renderCandidateGrid(draft, this.thumbnails, {
        onToggle: (id) => {
          draft.toggle(id);
          this.renderRound();
        },
        onReason: (id, text) => draft.setReason(id, text),
      }),
    );

    const diversity = el("input", { class: "diversity-toggle", type: "checkbox" }) as HTMLInputElement;
    diversity.checked = draft.wantDiversity;
    diversity.addEventListener("change", () => {
      draft.wantDiversity = diversity.checked;
    });
    const submit = el("button", { class: "submit-button", type: "button" }, [
      `Submit selection (${draft.selectedCount} of ${session.n} kept)`,
    ]);
    submit.addEventListener("click", () => void this.submit());
    this.main.append(
      el("div", { class: "submit-bar" }, [
        el("label", { class: "diversity-label" }, [diversity, "ask for more diversity"]),
        submit,
      ]),
    );
  }

  // -- selection submit -------------------------------------------------------

  async submit(): Promise<void> {
    const draft = this.draft!;
    if (draft.selectedCount === 0) {
      this.showConfirm(
        `Keeping none of the ${this.session!.n} candidates regenerates all of them. Continue?`,
        () => void this.doSubmit(),
      );
      return;
    }
    await this.doSubmit();
  }

  private async doSubmit(): Promise<void> {
    const session = this.session!;
    const draft = this.draft!;
    this.clearBanners();
    try {
      this.session = await this.client.postSelection(session.id, draft.payload(session.loop.round));
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        // Stale round: the selection stays local; refresh brings the
        // current candidates in and keeps whatever still applies.
        this.showBanner(
          "stale-round",
          `This view is behind (server is on round ${err.round}). Refresh to load the latest candidates; your picks are kept.`,
          "Refresh",
          () => void this.loadRound(),
        );
        return;
      }
      if (err instanceof ApiError && err.status === 409) {
        // Never auto-retry the POST; the user resubmits once the
        // concurrent update settles.
        this.showBanner(
          "conflict",
          "Another selection for this session is in flight. Wait for it to settle, then retry.",
          "Retry",
          () => void this.doSubmit(),
        );
        return;
      }
      this.showError(err);
      return;
    }
    await this.refreshEvents();
    if (this.session.loop.status === "collecting") {
      this.draft = new SelectionDraft([]);
      await this.loadRound();
    } else {
      await this.renderFinal();
    }
  }

  // -- finalization view ------------------------------------------------------

  private async renderFinal(): Promise<void> {
    const session = this.session!;
    clear(this.header);
    this.header.append(
      el("h1", {}, [session.prompt]),
      el("p", { class: "status-line" }, [
        `Finalization ${session.loop.status} (stage: ${session.conversation.stage})`,
      ]),
    );
    clear(this.main);
    await this.refreshEvents();
    const done = this.feed?.events.find((e) => e.event === "done");
    if (done && done.event === "done") {
      clear(this.scenesBox);
      for (const candidateId of done.snapshot_ids) {
        const scene = await this.client.getScene(session.id, candidateId);
        this.scenesBox.append(renderSceneTable(candidateId, scene));
      }
    }
  }

  // -- banners ----------------------------------------------------------------

  private showBanner(kind: string, text: string, actionLabel?: string, action?: () => void): void {
    const banner = el("div", { class: `banner banner-${kind}`, role: "alert" }, [
      el("span", {}, [text]),
    ]);
    if (actionLabel && action) {
      const button = el("button", { class: "banner-action", type: "button" }, [actionLabel]);
      button.addEventListener("click", () => {
        banner.remove();
        action();
      });
      banner.append(button);
    }
    this.bannerBox.append(banner);
  }

  private clearBanners(): void {
    // Action-required escalations stay up until the user dismisses the
    // page; transient request banners go away on the next attempt.
    for (const node of [...this.bannerBox.children]) {
      if (!node.className.includes("action-required")) node.remove();
    }
  }

  private showError(err: unknown): void {
    const text =
      err instanceof ApiError ? `${err.code}: ${err.message}` : `request failed: ${String(err)}`;
    this.showBanner("error", text);
  }

  private showConfirm(question: string, onConfirm: () => void): void {
    const confirm = el("button", { class: "confirm-yes", type: "button" }, ["Continue"]);
    const cancel = el("button", { class: "confirm-no", type: "button" }, ["Go back"]);
    const dialog = el("div", { class: "confirm-dialog", role: "dialog" }, [
      el("p", {}, [question]),
      confirm,
      cancel,
    ]);
    confirm.addEventListener("click", () => {
      dialog.remove();
      onConfirm();
    });
    cancel.addEventListener("click", () => dialog.remove());
    this.bannerBox.append(dialog);
  }
}
