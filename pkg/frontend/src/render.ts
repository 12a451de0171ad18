// Pure render helpers. The UI computes nothing: every number written into
// the DOM is a string taken verbatim from a service response
// (frequency_str, counts serialized by JSON round-trip of the raw body).

import type { ClusterReport, CorpusInfo, LemmaDetail, SuggestResponse } from "./api.js";

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderCorpusInfo(doc: Document, info: CorpusInfo): HTMLElement {
  const box = el(doc, "div", "corpus-info");
  box.append(
    el(doc, "span", "corpus-name", info.library),
    el(doc, "span", "corpus-count", ` ${info.count} lemmas`),
    el(doc, "span", "corpus-levels", ` (${info.levels.join(", ")})`),
  );
  return box;
}

export function renderClusterList(
  doc: Document,
  report: ClusterReport,
  onLemma: (name: string) => void,
): HTMLElement {
  const list = el(doc, "ol", "cluster-list");
  if (report.entries.length === 0) {
    list.append(el(doc, "li", "cluster-empty", "no clusters above the thresholds"));
    return list;
  }
  for (const entry of report.entries) {
    const item = el(doc, "li", "cluster");
    item.dataset.lemmas = entry.lemmas.join(",");
    const head = el(doc, "div", "cluster-head");
    head.append(
      el(doc, "span", "cluster-frequency", entry.frequency_str),
      el(doc, "span", "cluster-frequency-unit", "% of runs"),
    );
    item.append(head);
    const members = el(doc, "ul", "cluster-members");
    for (const name of entry.lemmas) {
      const member = el(doc, "li");
      const button = el(doc, "button", "lemma-link", name);
      button.addEventListener("click", () => onLemma(name));
      member.append(button);
      members.append(member);
    }
    item.append(members);
    list.append(item);
  }
  return list;
}

export function renderLemmaDetail(doc: Document, detail: LemmaDetail): HTMLElement {
  const panel = el(doc, "div", "lemma-detail");
  panel.append(
    el(doc, "h3", "lemma-name", detail.name),
    el(doc, "p", "lemma-statement", detail.statement),
    el(doc, "pre", "lemma-script", detail.script),
  );
  return panel;
}

export function renderSuggestion(
  doc: Document,
  response: SuggestResponse,
  onLemma: (name: string) => void,
): HTMLElement {
  const card = el(doc, "div", "suggest-card");
  if (!response.found || !response.lemmas) {
    card.append(el(doc, "p", "suggest-none", "no suggestion above the thresholds"));
    return card;
  }
  const head = el(doc, "div", "suggest-head");
  head.append(
    el(doc, "span", undefined, "similar finished proofs at "),
    el(doc, "span", "suggest-frequency", response.frequency_str ?? ""),
    el(doc, "span", undefined, "% of runs:"),
  );
  card.append(head);
  const list = el(doc, "ul", "suggest-members");
  for (const name of response.lemmas) {
    const item = el(doc, "li");
    const button = el(doc, "button", "lemma-link", name);
    button.addEventListener("click", () => onLemma(name));
    item.append(button);
    list.append(item);
  }
  card.append(list);
  return card;
}

export function renderError(doc: Document, code: string, message: string): HTMLElement {
  const banner = el(doc, "div", "error-banner");
  banner.dataset.code = code;
  banner.append(el(doc, "strong", undefined, code), el(doc, "span", undefined, " " + message));
  return banner;
}
