import type { ApiClient } from "./api.js";
import type { SessionEvent } from "./types.js";

// One feed per open session view. The events endpoint returns the
// whole ordered log, so resuming after a dropped poll just means
// keeping events with seq greater than the last one seen.
export class EventFeed {
  readonly events: SessionEvent[] = [];
  lastSeen = 0;
  private timer: ReturnType<typeof setInterval> | undefined;

  constructor(
    private readonly client: ApiClient,
    private readonly sessionId: string,
    private readonly onNew: (fresh: SessionEvent[]) => void,
  ) {}

  async pollOnce(): Promise<SessionEvent[]> {
    const all = await this.client.getEvents(this.sessionId);
    const fresh = all.filter((e) => e.seq > this.lastSeen);
    if (fresh.length > 0) {
      this.events.push(...fresh);
      this.lastSeen = fresh[fresh.length - 1].seq;
      this.onNew(fresh);
    }
    return fresh;
  }

  start(intervalMs = 1000): void {
    if (this.timer !== undefined) return;
    this.timer = setInterval(() => {
      this.pollOnce().catch(() => {
        // Transient poll failure: the next tick resumes from lastSeen.
      });
    }, intervalMs);
  }

  stop(): void {
    if (this.timer !== undefined) {
      clearInterval(this.timer);
      this.timer = undefined;
    }
  }

  get done(): boolean {
    return this.events.some((e) => e.event === "done");
  }
}
