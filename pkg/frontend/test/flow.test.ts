// The whole browser flow against the fixture-backed service: create a
// session, select across three rounds, watch the timeline finish, and
// read the scene tables. Every selection POST is schema-checked inside
// the service stub.

import { beforeEach, describe, expect, it } from "vitest";
import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import { ERRORS, FLAKY, FixtureService, HAPPY, cloneRun, validatorFor } from "./service.js";
import type { RecordedRun } from "./service.js";

async function waitFor(check: () => boolean, what = "condition"): Promise<void> {
  const deadline = Date.now() + 2000;
  while (!check()) {
    if (Date.now() > deadline) throw new Error(`timed out waiting for ${what}`);
    await new Promise((resolve) => setTimeout(resolve, 5));
  }
}

function mount(run: RecordedRun) {
  document.body.innerHTML = '<div id="app"></div>';
  const root = document.getElementById("app")!;
  const service = new FixtureService(run);
  const app = new App(root, new ApiClient("", service.fetch), { autoPoll: false });
  return { root, service, app };
}

function cardToggle(root: HTMLElement, id: string): HTMLButtonElement {
  return root.querySelector(`[data-candidate-id="${id}"] .keep-toggle`)!;
}

function keepExactly(root: HTMLElement, app: App, ids: string[]): void {
  for (const card of root.querySelectorAll<HTMLElement>(".card")) {
    const id = card.getAttribute("data-candidate-id")!;
    if (app.draft!.isSelected(id) !== ids.includes(id)) cardToggle(root, id).click();
  }
}

beforeEach(() => {
  window.location.hash = "";
});

describe("full selection flow", () => {
  it("runs create, three selection rounds, done timeline, and scene tables", async () => {
    const { root, service, app } = mount(cloneRun(HAPPY));
    await app.boot();
    // No hash: the create form shows first.
    root.querySelector<HTMLTextAreaElement>(".prompt-input")!.value = HAPPY.prompt;
    root.querySelector<HTMLInputElement>(".count-input")!.value = String(HAPPY.n);
    root.querySelector<HTMLButtonElement>(".create-button")!.click();
    await waitFor(() => root.querySelectorAll(".card").length === 4, "round 1 grid");
    expect(window.location.hash).toBe("#s0001");
    expect(root.querySelector(".status-line")!.textContent).toContain("Round 1");

    for (const [i, selection] of HAPPY.selections!.entries()) {
      await waitFor(() => root.querySelectorAll(".card").length === 4, `round ${i + 1} grid`);
      keepExactly(root, app, selection.selected_ids);
      for (const [id, reason] of Object.entries(selection.rejection_reasons ?? {})) {
        const field = root.querySelector<HTMLTextAreaElement>(
          `[data-candidate-id="${id}"] .reason`,
        )!;
        field.value = reason;
        field.dispatchEvent(new Event("input"));
      }
      if (selection.want_diversity) {
        const toggle = root.querySelector<HTMLInputElement>(".diversity-toggle")!;
        toggle.checked = true;
        toggle.dispatchEvent(new Event("change"));
      }
      root.querySelector<HTMLButtonElement>(".submit-button")!.click();
      await waitFor(() => service.posted.length === i + 1, `selection ${i + 1} posted`);
      if (i < HAPPY.selections!.length - 1) {
        await waitFor(
          () => root.querySelector(".status-line")!.textContent!.includes(`Round ${i + 2}`),
          `round ${i + 2} view`,
        );
      }
    }

    await waitFor(() => root.querySelectorAll(".scene").length === 4, "scene tables");
    // Every posted body went through the schema gate in the service;
    // re-check explicitly and compare against the recorded run.
    const validate = validatorFor("selection_request");
    expect(service.posted).toHaveLength(3);
    for (const [i, posted] of service.posted.entries()) {
      expect(validate(posted)).toBe(true);
      expect(posted.round).toBe(HAPPY.selections![i].round);
      expect([...posted.selected_ids].sort()).toEqual(
        [...HAPPY.selections![i].selected_ids].sort(),
      );
      expect(posted.rejection_reasons).toEqual(HAPPY.selections![i].rejection_reasons);
      expect(posted.want_diversity).toEqual(HAPPY.selections![i].want_diversity);
    }

    const items = [...root.querySelectorAll(".timeline li")];
    expect(items.length).toBeGreaterThanOrEqual(4);
    expect(items[items.length - 1].className).toContain("event-done");
    expect(root.querySelector(".status-line")!.textContent).toContain("done");

    // Scene tables show objects, params, and bound expressions from
    // the recorded snapshots.
    const lampScene = root.querySelector('[data-scene-id="floor-lamp"]')!;
    const rows = [...lampScene.querySelectorAll("tbody tr")];
    expect(rows.map((r) => r.querySelector(".obj-name")!.textContent)).toEqual(["bulb", "stem"]);
    expect(lampScene.textContent).toContain("bulb.tz = stem.sz");
    expect(lampScene.textContent).toContain("emissive=#ffd9a0@1.8");
    expect(root.querySelectorAll(".banner-action-required")).toHaveLength(0);
  });

  it("reopens a finished session from the URL hash alone", async () => {
    const run = cloneRun(HAPPY);
    const { root, service, app } = mount(run);
    service.stateIndex = run.states.length - 1;
    window.location.hash = "#s0001";
    await app.boot();
    await waitFor(() => root.querySelectorAll(".scene").length === 4, "scene tables");
    const items = [...root.querySelectorAll(".timeline li")];
    expect(items[items.length - 1].className).toContain("event-done");
    expect(service.posted).toHaveLength(0);
  });
});

describe("stale round handling", () => {
  it("banners, keeps the local picks, and succeeds after refresh", async () => {
    const run = cloneRun(HAPPY);
    run.selections = undefined;
    const { root, service, app } = mount(run);
    service.stateIndex = 1;
    window.location.hash = "#s0001";
    await app.boot();
    await waitFor(() => root.querySelectorAll(".card").length === 4, "grid");

    keepExactly(root, app, ["walnut-shelf", "floor-lamp", "velvet-armchair"]);
    service.failNextSelections.push(ERRORS.stale);
    root.querySelector<HTMLButtonElement>(".submit-button")!.click();
    await waitFor(() => root.querySelector(".banner-stale-round") !== null, "stale banner");

    const banner = root.querySelector(".banner-stale-round")!;
    expect(banner.textContent).toContain(`round ${ERRORS.stale.body.round}`);
    expect(app.draft!.isSelected("walnut-shelf")).toBe(true);
    expect(app.draft!.isSelected("velvet-armchair")).toBe(true);

    // The service has moved on a round; refresh re-pulls candidates and
    // the surviving selection submits cleanly.
    service.stateIndex = 2;
    banner.querySelector<HTMLButtonElement>(".banner-action")!.click();
    await waitFor(
      () => root.querySelector(".status-line")!.textContent!.includes("Round 3"),
      "refreshed round",
    );
    expect(app.draft!.isSelected("walnut-shelf")).toBe(true);
    keepExactly(root, app, ["walnut-shelf", "floor-lamp", "velvet-armchair", "wool-throw"]);
    root.querySelector<HTMLButtonElement>(".submit-button")!.click();
    await waitFor(() => root.querySelectorAll(".scene").length > 0, "finalized");
    expect(service.posted[service.posted.length - 1].round).toBe(3);
  });
});

describe("conflict handling", () => {
  it("banners on 409 and retries only on explicit request", async () => {
    const run = cloneRun(HAPPY);
    run.selections = undefined;
    const { root, service, app } = mount(run);
    window.location.hash = "#s0001";
    await app.boot();
    await waitFor(() => root.querySelectorAll(".card").length === 4, "grid");

    keepExactly(root, app, ["walnut-shelf"]);
    service.failNextSelections.push(ERRORS.conflict);
    root.querySelector<HTMLButtonElement>(".submit-button")!.click();
    await waitFor(() => root.querySelector(".banner-conflict") !== null, "conflict banner");
    expect(service.posted).toHaveLength(1);

    root
      .querySelector<HTMLButtonElement>(".banner-conflict .banner-action")!
      .click();
    await waitFor(() => service.posted.length === 2, "manual retry");
    expect(service.posted[1]).toEqual(service.posted[0]);
  });
});

describe("empty selection confirmation", () => {
  it("asks before regenerating everything and posts only on confirm", async () => {
    const run = cloneRun(HAPPY);
    run.selections = undefined;
    const { root, service, app } = mount(run);
    window.location.hash = "#s0001";
    await app.boot();
    await waitFor(() => root.querySelectorAll(".card").length === 4, "grid");

    root.querySelector<HTMLButtonElement>(".submit-button")!.click();
    await waitFor(() => root.querySelector(".confirm-dialog") !== null, "confirm dialog");
    expect(service.posted).toHaveLength(0);
    root.querySelector<HTMLButtonElement>(".confirm-no")!.click();
    expect(root.querySelector(".confirm-dialog")).toBeNull();
    expect(service.posted).toHaveLength(0);

    root.querySelector<HTMLButtonElement>(".submit-button")!.click();
    await waitFor(() => root.querySelector(".confirm-dialog") !== null, "confirm dialog again");
    root.querySelector<HTMLButtonElement>(".confirm-yes")!.click();
    await waitFor(() => service.posted.length === 1, "empty selection posted");
    expect(service.posted[0].selected_ids).toEqual([]);
    expect(validatorFor("selection_request")(service.posted[0])).toBe(true);
  });
});

describe("escalation display", () => {
  it("raises a prominent action-required banner with the step text", async () => {
    const { root, service, app } = mount(cloneRun(FLAKY));
    window.location.hash = "#s0001";
    await app.boot();
    await waitFor(() => root.querySelectorAll(".card").length === 2, "grid");
    keepExactly(root, app, ["oak-desk", "pine-desk"]);
    root.querySelector<HTMLButtonElement>(".submit-button")!.click();
    await waitFor(() => root.querySelector(".banner-action-required") !== null, "escalation banner");

    const banner = root.querySelector(".banner-action-required")!;
    expect(banner.textContent).toContain("pine-desk");
    expect(banner.textContent).toContain("already exists");
    expect(root.querySelector(".timeline .event-escalation")).not.toBeNull();
    await waitFor(() => root.querySelectorAll(".scene").length === 2, "scene tables");
    expect(service.posted).toHaveLength(1);
    const doneItem = root.querySelector(".timeline .event-done")!;
    expect(doneItem.textContent).toContain("pine-desk incomplete");
  });
});
