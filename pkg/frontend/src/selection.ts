import type { Candidate, SelectionRequest } from "./types.js";

// Local selection state for one round. Nothing leaves the browser
// until submit; toggles and reasons are held here.
export class SelectionDraft {
  private selected = new Set<string>();
  private reasons = new Map<string, string>();
  wantDiversity = false;

  constructor(public candidates: Candidate[]) {}

  isSelected(id: string): boolean {
    return this.selected.has(id);
  }

  toggle(id: string): void {
    if (this.selected.has(id)) this.selected.delete(id);
    else this.selected.add(id);
  }

  setReason(id: string, text: string): void {
    if (text.trim() === "") this.reasons.delete(id);
    else this.reasons.set(id, text);
  }

  reasonFor(id: string): string {
    return this.reasons.get(id) ?? "";
  }

  get selectedCount(): number {
    return this.selected.size;
  }

  // After a stale-round refresh the candidate list may have changed;
  // keep whatever choices still refer to live candidates.
  adoptCandidates(candidates: Candidate[]): void {
    this.candidates = candidates;
    const live = new Set(candidates.map((c) => c.id));
    for (const id of [...this.selected]) if (!live.has(id)) this.selected.delete(id);
    for (const id of [...this.reasons.keys()]) if (!live.has(id)) this.reasons.delete(id);
  }

  // Reasons only accompany candidates actually being rejected.
  payload(round: number): SelectionRequest {
    const rejection: Record<string, string> = {};
    for (const c of this.candidates) {
      if (!this.selected.has(c.id)) {
        const reason = this.reasons.get(c.id);
        if (reason !== undefined) rejection[c.id] = reason;
      }
    }
    const body: SelectionRequest = {
      round,
      selected_ids: this.candidates.filter((c) => this.selected.has(c.id)).map((c) => c.id),
    };
    if (Object.keys(rejection).length > 0) body.rejection_reasons = rejection;
    if (this.wantDiversity) body.want_diversity = true;
    return body;
  }
}
