// Wiring: controls drive POST /cluster (one in-flight request, newer
// changes abort older ones), clicks open lemma details, the suggest box
// posts a partial proof. Control state round-trips through the URL.

import { ApiError, Client, EngineSettings } from "./api.js";
import {
  renderClusterList,
  renderCorpusInfo,
  renderError,
  renderLemmaDetail,
  renderSuggestion,
} from "./render.js";
import { queryFromSettings, settingsFromQuery } from "./state.js";

export interface App {
  client: Client;
  settings: EngineSettings;
  refresh(): Promise<void>;
  suggest(partial: string): Promise<void>;
  showLemma(name: string): Promise<void>;
  setControl(name: keyof EngineSettings, value: string | number): Promise<void>;
}

function replaceChildren(target: HTMLElement, ...nodes: (HTMLElement | Text)[]): void {
  while (target.firstChild) target.removeChild(target.firstChild);
  for (const node of nodes) target.appendChild(node);
}

export function createApp(doc: Document, base: string, win?: Window): App {
  const client = new Client(base);
  const query = win ? win.location.search : "";
  let settings = settingsFromQuery(query);
  let pending: AbortController | null = null;

  const results = doc.getElementById("results") as HTMLElement;
  const detail = doc.getElementById("detail") as HTMLElement;
  const suggestBox = doc.getElementById("suggest-result") as HTMLElement;
  const corpusBox = doc.getElementById("corpus") as HTMLElement;
  const errors = doc.getElementById("errors") as HTMLElement;

  function syncControls(): void {
    (doc.getElementById("algorithm") as HTMLSelectElement).value = settings.algorithm;
    (doc.getElementById("level") as HTMLSelectElement).value = settings.level;
    (doc.getElementById("granularity") as HTMLInputElement).value = String(settings.granularity);
    (doc.getElementById("frequency") as HTMLSelectElement).value = String(settings.frequency_param);
    (doc.getElementById("seed") as HTMLInputElement).value = String(settings.seed);
    if (win && win.history && win.history.replaceState) {
      win.history.replaceState(null, "", queryFromSettings(settings));
    }
  }

  function showError(error: unknown): void {
    const code = error instanceof ApiError ? error.code : "connection_error";
    const message = error instanceof Error ? error.message : String(error);
    replaceChildren(errors, renderError(doc, code, message));
  }

  function clearError(): void {
    replaceChildren(errors);
  }

  const app: App = {
    client,
    get settings() {
      return settings;
    },
    set settings(next: EngineSettings) {
      settings = next;
    },

    async refresh(): Promise<void> {
      if (pending) pending.abort();
      const controller = new AbortController();
      pending = controller;
      try {
        const report = await client.cluster(settings, controller.signal);
        if (pending !== controller) return; // superseded meanwhile
        clearError();
        replaceChildren(results, renderClusterList(doc, report, (n) => void app.showLemma(n)));
      } catch (error) {
        if (error instanceof DOMException && error.name === "AbortError") return;
        showError(error); // keep controls usable; stale list stays visible
      } finally {
        if (pending === controller) pending = null;
      }
    },

    async suggest(partial: string): Promise<void> {
      if (!partial.trim()) {
        replaceChildren(
          suggestBox,
          renderError(doc, "empty", "paste the beginning of a proof first"),
        );
        return;
      }
      try {
        const response = await client.suggest(partial, settings);
        clearError();
        replaceChildren(suggestBox, renderSuggestion(doc, response, (n) => void app.showLemma(n)));
      } catch (error) {
        if (error instanceof ApiError && error.code === "parse_error") {
          replaceChildren(suggestBox, renderError(doc, error.code, error.message));
        } else {
          showError(error);
        }
      }
    },

    async showLemma(name: string): Promise<void> {
      try {
        const info = await client.lemma(name);
        replaceChildren(detail, renderLemmaDetail(doc, info));
      } catch (error) {
        if (error instanceof ApiError && error.code === "not_found") {
          replaceChildren(detail, renderError(doc, error.code, error.message));
        } else {
          showError(error);
        }
      }
    },

    async setControl(name, value): Promise<void> {
      settings = { ...settings, [name]: typeof value === "number" ? value : value };
      syncControls();
      await app.refresh();
    },
  };

  syncControls();

  doc.getElementById("algorithm")!.addEventListener("change", (e) => {
    void app.setControl("algorithm", (e.target as HTMLSelectElement).value);
  });
  doc.getElementById("level")!.addEventListener("change", (e) => {
    void app.setControl("level", (e.target as HTMLSelectElement).value);
  });
  doc.getElementById("granularity")!.addEventListener("change", (e) => {
    void app.setControl("granularity", parseInt((e.target as HTMLInputElement).value, 10));
  });
  doc.getElementById("frequency")!.addEventListener("change", (e) => {
    void app.setControl("frequency_param", parseInt((e.target as HTMLSelectElement).value, 10));
  });
  doc.getElementById("seed")!.addEventListener("change", (e) => {
    void app.setControl("seed", parseInt((e.target as HTMLInputElement).value, 10));
  });
  doc.getElementById("suggest-run")!.addEventListener("click", () => {
    const text = (doc.getElementById("suggest-input") as HTMLTextAreaElement).value;
    void app.suggest(text);
  });

  void client
    .corpus()
    .then((info) => replaceChildren(corpusBox, renderCorpusInfo(doc, info)))
    .catch(showError);

  return app;
}

declare global {
  interface Window {
    proofminerApp?: App;
  }
}

// browser entry point; tests build the app explicitly instead
if (typeof window !== "undefined" && typeof document !== "undefined") {
  if (document.getElementById("results")) {
    window.proofminerApp = createApp(document, "", window);
    void window.proofminerApp.refresh();
  }
}
