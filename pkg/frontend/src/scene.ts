import { el } from "./dom.js";
import type { Scene, SceneObject } from "./types.js";

function transformSummary(o: SceneObject): string {
  const t = o.transform;
  return `t=(${t.tx},${t.ty},${t.tz}) r=(${t.rx},${t.ry},${t.rz}) s=(${t.sx},${t.sy},${t.sz})`;
}

// Object table straight from the snapshot: name, kind, transform,
// params, and any expression bound to one of the object's parameters.
export function renderSceneTable(candidateId: string, scene: Scene): HTMLElement {
  const boundBy = new Map<string, string[]>();
  for (const b of scene.bindings) {
    const object = b.target.slice(0, b.target.lastIndexOf("."));
    const entry = boundBy.get(object) ?? [];
    entry.push(`${b.target} = ${b.expr}`);
    boundBy.set(object, entry);
  }

  const rows = scene.objects.map((o) =>
    el("tr", {}, [
      el("td", { class: "obj-name" }, [o.name]),
      el("td", {}, [o.kind]),
      el("td", { class: "obj-transform" }, [transformSummary(o)]),
      el("td", {}, [
        Object.entries(o.params)
          .map(([k, v]) => `${k}=${v}`)
          .join(" "),
      ]),
      el("td", { class: "obj-bindings" }, [(boundBy.get(o.name) ?? []).join("; ")]),
    ]),
  );

  return el("section", { class: "scene", "data-scene-id": candidateId }, [
    el("h3", {}, [`Scene: ${candidateId}`]),
    el("table", { class: "scene-table" }, [
      el("thead", {}, [
        el("tr", {}, [
          el("th", {}, ["object"]),
          el("th", {}, ["kind"]),
          el("th", {}, ["transform"]),
          el("th", {}, ["params"]),
          el("th", {}, ["bound expressions"]),
        ]),
      ]),
      el("tbody", {}, rows),
    ]),
  ]);
}
