import { ApiClient } from "./api.js";
import { App } from "./app.js";

// Served from /app by the session service; the API is same-origin.
const root = document.getElementById("app");
if (root) {
  const app = new App(root, new ApiClient(""));
  void app.boot();
  window.addEventListener("hashchange", () => window.location.reload());
}
