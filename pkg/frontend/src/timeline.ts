import { el } from "./dom.js";
import type { SessionEvent } from "./types.js";

function describe(event: SessionEvent): string {
  switch (event.event) {
    case "round_opened":
      return `Round ${event.round} opened with ${event.candidate_ids.join(", ")}`;
    case "finalization_step":
      return (
        `${event.candidate_id}: step ${event.step_index + 1} ` +
        `(${event.description}) ${event.status} after ${event.attempts} attempt(s)`
      );
    case "escalation":
      return `${event.candidate_id}: step ${event.step_index + 1} needs attention: ${event.message}`;
    case "done": {
      const built = Object.entries(event.completed)
        .map(([id, ok]) => `${id} ${ok ? "built" : "incomplete"}`)
        .join(", ");
      return `Done: ${built}`;
    }
  }
}

// Events arrive already ordered and gap-free; render them one list
// item each, in sequence.
export function renderTimeline(events: SessionEvent[]): HTMLElement {
  const list = el("ol", { class: "timeline" });
  for (const event of events) {
    list.append(
      el("li", { class: `event event-${event.event}`, "data-seq": String(event.seq) }, [
        describe(event),
      ]),
    );
  }
  return list;
}
