/**
 * DOM rendering for the annotation screen.
 *
 * Left pane: the target sentence with its trigger highlighted. Right
 * pane: the current candidate cluster's mentions, one candidate at a
 * time, with their triggers highlighted. All content renders from the
 * controller's ViewState; this module holds no session logic.
 */

import type { SessionController, ViewState } from "./controller.js";
import type { MentionView } from "./types.js";

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Sentence tokens with the trigger span wrapped in <mark>. */
export function sentenceHtml(m: MentionView): string {
  const start = m.trigger_start;
  const end = m.trigger_start + m.trigger_token_count;
  return m.sentence_tokens
    .map((token, i) => {
      const safe = escapeHtml(token);
      return i >= start && i < end ? `<mark>${safe}</mark>` : safe;
    })
    .join(" ");
}

function mentionCard(m: MentionView): string {
  return `
    <div class="mention-card">
      <div class="mention-meta">${escapeHtml(m.doc_id)} · sentence ${m.sentence_id}</div>
      <div class="mention-sentence">${sentenceHtml(m)}</div>
    </div>`;
}

function progressPercent(state: ViewState): number {
  return state.total === 0 ? 100 : Math.round((100 * state.done) / state.total);
}

function banner(state: ViewState): string {
  if (state.phase === "offline") {
    return `<div class="banner offline">Service unreachable - working offline is not possible.
      <button data-action="retry">Retry</button></div>`;
  }
  if (state.phase === "error" && state.error) {
    const code = state.error.status === null ? "" : `(${state.error.status}) `;
    return `<div class="banner error">${code}${escapeHtml(state.error.message)}
      <button data-action="retry">Retry</button></div>`;
  }
  return "";
}

function candidatePane(state: ViewState): string {
  if (state.candidateCount === 0) {
    return `<p class="empty">No candidates - this is the first mention of its kind.
      Create a new cluster.</p>`;
  }
  if (!state.candidate) {
    return `<p class="empty">All ${state.candidateCount} candidates reviewed and rejected.
      Create a new cluster.</p>`;
  }
  const c = state.candidate;
  return `
    <div class="candidate-header">
      Candidate ${c.rank} of ${state.candidateCount}
      <span class="score">score ${c.score.toFixed(3)}</span>
    </div>
    ${c.mentions.map(mentionCard).join("")}`;
}

export function render(root: HTMLElement, state: ViewState, controller: SessionController): void {
  if (state.phase === "connecting") {
    root.innerHTML = `<p class="empty">Connecting...</p>`;
    return;
  }
  if (state.phase === "exhausted") {
    root.innerHTML = `
      ${banner(state)}
      <div class="summary">
        <h2>Session complete</h2>
        <p>${state.total} mentions annotated with
           <strong>${state.comparisonsTotal}</strong> comparisons.</p>
      </div>`;
    return;
  }

  const target = state.target;
  root.innerHTML = `
    ${banner(state)}
    <div class="statusbar">
      <div class="progress"><div class="progress-fill" style="width:${progressPercent(state)}%"></div></div>
      <span>${state.done} / ${state.total} mentions</span>
      <span class="comparisons">Comparisons: <strong id="comparisons-total">${state.comparisonsTotal}</strong></span>
    </div>
    <div class="panes">
      <section class="pane target-pane">
        <h2>Target</h2>
        ${target ? mentionCard(target) : ""}
      </section>
      <section class="pane candidate-pane">
        <h2>Candidate</h2>
        ${candidatePane(state)}
      </section>
    </div>
    <div class="controls">
      <button data-action="accept" ${state.canAccept ? "" : "disabled"}>
        Accept (coreferent)</button>
      <button data-action="reject" ${state.canReject ? "" : "disabled"}>
        Reject (next candidate)</button>
      <button data-action="new-cluster" ${state.canNewCluster ? "" : "disabled"}>
        None of these - new cluster</button>
      <span class="reviewed">reviewed this target: ${state.reviewedCount}</span>
    </div>`;

  root.querySelectorAll<HTMLButtonElement>("button[data-action]").forEach((button) => {
    button.addEventListener("click", () => {
      switch (button.dataset.action) {
        case "accept":
          void controller.accept();
          break;
        case "reject":
          controller.reject();
          break;
        case "new-cluster":
          void controller.newCluster();
          break;
        case "retry":
          void controller.retry();
          break;
      }
    });
  });
}
