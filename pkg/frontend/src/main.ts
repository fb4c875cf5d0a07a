// Browser wiring for the exercise page: pick an exercise, edit or upload
// a diagram document, check it, and render the feedback. One check is in
// flight at a time; the button stays disabled until the response lands.

import { ApiClient, ApiClientError } from "./api.js";
import { parseDocument, renderDiagram } from "./diagram.js";
import { escapeHtml } from "./format.js";
import {
  renderAvatar,
  renderCheckOutcome,
  renderExerciseTile,
  renderLeaderboard,
  renderMood,
} from "./render.js";
import { exerciseTile } from "./viewmodel.js";
import type { ExerciseDetail, ExerciseSummary, LeaderboardEntry } from "./types.js";

function element<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function refreshHome(client: ApiClient): Promise<ExerciseSummary[]> {
  const exercises = await client.listExercises();
  element("tiles").innerHTML = exercises
    .map((summary) => renderExerciseTile(exerciseTile(summary)))
    .join("");
  const profile = await client.profile();
  element("avatar").innerHTML = renderAvatar(profile.equippedProps);
  element("mood").innerHTML = renderMood(profile.mood);
  element("student").textContent =
    `${profile.displayName} - level ${profile.level}, ${profile.totalXp} XP`;
  return exercises;
}

async function openExercise(client: ApiClient, exerciseId: string): Promise<ExerciseDetail> {
  const detail = await client.exerciseDetail(exerciseId);
  element("statement").textContent = detail.statement;
  element("boss").innerHTML = detail.completed
    ? ""
    : `<div class="boss" data-icon="${escapeHtml(detail.boss.iconId)}">` +
      `<blockquote>${escapeHtml(detail.boss.taunt)}</blockquote></div>`;
  element("board").innerHTML = renderLeaderboard(
    detail.leaderboard as LeaderboardEntry[],
    "completeness"
  );
  return detail;
}

export function boot(): void {
  const tokenInput = element<HTMLInputElement>("token");
  const editor = element<HTMLTextAreaElement>("editor");
  const upload = element<HTMLInputElement>("upload");
  const checkButton = element<HTMLButtonElement>("check");
  const picker = element<HTMLSelectElement>("exercise");
  const client = new ApiClient("", tokenInput.value);
  let current: ExerciseDetail | null = null;

  tokenInput.addEventListener("change", async () => {
    client.setToken(tokenInput.value.trim());
    const exercises = await refreshHome(client);
    picker.innerHTML = exercises
      .map(
        (summary) =>
          `<option value="${escapeHtml(summary.exerciseId)}">${escapeHtml(summary.title)}</option>`
      )
      .join("");
    if (exercises.length > 0) {
      current = await openExercise(client, exercises[0].exerciseId);
    }
  });

  picker.addEventListener("change", async () => {
    current = await openExercise(client, picker.value);
  });

  upload.addEventListener("change", async () => {
    const file = upload.files?.[0];
    if (file) {
      editor.value = await file.text();
      renderPreview();
    }
  });
  editor.addEventListener("input", () => renderPreview());

  function renderPreview(): void {
    try {
      const doc = parseDocument(editor.value);
      element("canvas").innerHTML = renderDiagram(doc, {
        solutionIndex: 0,
        matching: { pairs: {}, unmatchedRefs: [], similarityUsed: {} },
        relationMatching: { matched: [], unmatched: [], matchedRelationIds: {} },
        completeness: { perKind: {}, overall: 0 },
        syntactic: [],
        semantic: [],
        matchedList: [],
      });
    } catch {
      // keep the previous drawing while the editor holds a partial document
    }
  }

  checkButton.addEventListener("click", async () => {
    if (!current || checkButton.disabled) return;
    checkButton.disabled = true;
    try {
      const response = await client.submitCheck(current.exerciseId, editor.value);
      element("feedback").innerHTML = renderCheckOutcome(response, current, current.baseXp);
      try {
        element("canvas").innerHTML = renderDiagram(parseDocument(editor.value), response.report);
      } catch {
        // the service accepted it; a local render failure only skips the overlay
      }
      if (response.completion) {
        current = await openExercise(client, current.exerciseId);
        await refreshHome(client);
      }
    } catch (error) {
      const message =
        error instanceof ApiClientError ? error.message : "the check request failed";
      element("feedback").innerHTML = `<p class="error">${escapeHtml(message)}</p>`;
    } finally {
      checkButton.disabled = false;
    }
  });
}

if (typeof document !== "undefined") {
  boot();
}
