/**
 * Bootstrap: connect to the annotation service, pick or create a
 * session, and wire the controller to the view. The only configuration
 * is the service base URL (query parameter ?api=..., persisted in
 * localStorage).
 */

import { ApiClient } from "./api.js";
import { SessionController } from "./controller.js";
import { render } from "./view.js";

const DEFAULT_BASE_URL = "http://127.0.0.1:8000";

function baseUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  if (fromQuery) {
    localStorage.setItem("corefloop.baseUrl", fromQuery);
    return fromQuery;
  }
  return localStorage.getItem("corefloop.baseUrl") ?? DEFAULT_BASE_URL;
}

async function pickSession(api: ApiClient): Promise<string> {
  const fromQuery = new URLSearchParams(window.location.search).get("session");
  if (fromQuery) {
    return fromQuery;
  }
  const sessions = await api.listSessions();
  const open = sessions.find((s) => s.done < s.total);
  if (open) {
    return open.session_id;
  }
  // no open session: start one from the server's configured corpus
  const created = await api.createSession({});
  return created.session_id;
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) {
    throw new Error("missing #app container");
  }
  const api = new ApiClient(baseUrl());
  document.getElementById("base-url")!.textContent = baseUrl();
  try {
    const sessionId = await pickSession(api);
    document.getElementById("session-id")!.textContent = sessionId;
    const controller = new SessionController(api, sessionId);
    controller.onChange((state) => render(root, state, controller));
    await controller.start();
  } catch (cause) {
    root.innerHTML = `<div class="banner offline">Cannot reach the annotation
      service at <code>${baseUrl()}</code>. Start it with
      <code>corefloop serve ... --state DIR</code> and reload, or point this
      page at it with <code>?api=http://host:port</code>.</div>`;
    console.error(cause);
  }
}

void boot();
