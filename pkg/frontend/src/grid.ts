import { el } from "./dom.js";
import type { SelectionDraft } from "./selection.js";
import type { Candidate } from "./types.js";

// The server's SVG is inlined verbatim; the UI draws nothing itself.
// Anything that does not parse as a lone <svg> document gets a
// fallback card instead.
export function thumbnailNode(svgText: string, candidateId: string): HTMLElement {
  const parsed = new DOMParser().parseFromString(svgText, "image/svg+xml");
  const root = parsed.documentElement;
  const broken = root.nodeName !== "svg" || parsed.querySelector("parsererror") !== null;
  const box = el("div", { class: "thumb" });
  if (broken) {
    box.classList.add("thumb-fallback");
    box.append(el("span", {}, [`no preview for ${candidateId}`]));
  } else {
    box.innerHTML = svgText;
  }
  return box;
}

export interface GridHooks {
  onToggle: (id: string) => void;
  onReason: (id: string, text: string) => void;
}

function card(
  candidate: Candidate,
  svgText: string,
  draft: SelectionDraft,
  hooks: GridHooks,
): HTMLElement {
  const selected = draft.isSelected(candidate.id);
  const node = el("article", {
    class: selected ? "card selected" : "card",
    "data-candidate-id": candidate.id,
  });
  node.append(thumbnailNode(svgText, candidate.id));
  node.append(el("h3", { class: "descriptor" }, [candidate.descriptor]));

  const params = el("dl", { class: "params" });
  for (const [name, value] of Object.entries(candidate.params)) {
    params.append(el("dt", {}, [name]), el("dd", {}, [String(value)]));
  }
  node.append(params);

  const toggle = el("button", { class: "keep-toggle", type: "button" }, [
    selected ? "Keeping" : "Keep",
  ]);
  toggle.addEventListener("click", () => hooks.onToggle(candidate.id));
  node.append(toggle);

  if (!selected) {
    const reason = el("textarea", {
      class: "reason",
      placeholder: "Why reject this one? (optional)",
    }) as HTMLTextAreaElement;
    reason.value = draft.reasonFor(candidate.id);
    reason.addEventListener("input", () => hooks.onReason(candidate.id, reason.value));
    node.append(reason);
  }
  return node;
}

export function renderCandidateGrid(
  draft: SelectionDraft,
  thumbnails: Map<string, string>,
  hooks: GridHooks,
): HTMLElement {
  const grid = el("div", { class: "candidate-grid" });
  for (const candidate of draft.candidates) {
    grid.append(card(candidate, thumbnails.get(candidate.id) ?? "", draft, hooks));
  }
  return grid;
}
