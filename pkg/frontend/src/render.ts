// HTML renderers for the exercise page pieces. Everything is a string
// builder over view models so the contract tests run without a browser.

import { escapeHtml } from "./format.js";
import type { CheckResponse, ExerciseSummary, LeaderboardEntry, MoodView } from "./types.js";
import {
  BossDisplay,
  CompletionView,
  ExerciseTileView,
  FeedbackPanels,
  ProgressCircle,
  RecapView,
  avatarLayers,
  bossDisplay,
  completionView,
  exerciseTile,
  feedbackPanels,
  progressCircles,
  recapView,
} from "./viewmodel.js";

function listItems(items: string[], kind: string): string {
  if (items.length === 0) {
    return `<li class="empty">none</li>`;
  }
  return items.map((item) => `<li class="${kind}">${item}</li>`).join("");
}

export function renderFeedbackPanels(panels: FeedbackPanels): string {
  const syntactic = listItems(
    panels.syntactic.map((diag) => escapeHtml(diag.message)),
    "syntactic"
  );
  const semantic = listItems(
    panels.semantic.map((diag) => escapeHtml(diag.message)),
    "semantic"
  );
  const matched = listItems(
    panels.matched.map((item) => escapeHtml(item.displayName)),
    "matched"
  );
  return (
    `<section class="feedback">` +
    `<div class="panel" data-panel="syntactic"><h3>Syntactic errors (${panels.syntactic.length})</h3><ul>${syntactic}</ul></div>` +
    `<div class="panel" data-panel="semantic"><h3>Semantic errors (${panels.semantic.length})</h3><ul>${semantic}</ul></div>` +
    `<div class="panel" data-panel="matched"><h3>Valid matches (${panels.matched.length})</h3><ul>${matched}</ul></div>` +
    `</section>`
  );
}

export function renderProgressCircle(circle: ProgressCircle): string {
  const radius = 36;
  const circumference = 2 * Math.PI * radius;
  const filled = (circle.percent / 100) * circumference;
  return (
    `<div class="circle" data-label="${escapeHtml(circle.label)}" data-percent="${circle.percent}">` +
    `<svg viewBox="0 0 100 100" width="90" height="90">` +
    `<circle cx="50" cy="50" r="${radius}" fill="none" stroke="#e5e7eb" stroke-width="10"/>` +
    `<circle cx="50" cy="50" r="${radius}" fill="none" stroke="#2563eb" stroke-width="10" ` +
    `stroke-dasharray="${filled.toFixed(1)} ${circumference.toFixed(1)}" transform="rotate(-90 50 50)"/>` +
    `<text x="50" y="54" text-anchor="middle" font-size="18">${circle.percent}%</text>` +
    `</svg>` +
    `<span class="caption">${escapeHtml(circle.label)}: ${escapeHtml(circle.caption)}</span>` +
    `</div>`
  );
}

export function renderIndicators(circles: ProgressCircle[]): string {
  return `<div class="indicators">${circles.map(renderProgressCircle).join("")}</div>`;
}

export function renderMood(mood: MoodView): string {
  return (
    `<div class="mood" data-index="${mood.index}">` +
    `Avatar mood: <strong>${escapeHtml(mood.label)}</strong>` +
    `</div>`
  );
}

export function renderAvatar(equippedProps: string[]): string {
  const layers = avatarLayers(equippedProps)
    .map((layer) => `<span class="layer" data-prop="${escapeHtml(layer)}"></span>`)
    .join("");
  return `<div class="avatar">${layers}</div>`;
}

export function renderBoss(boss: BossDisplay): string {
  if (!boss.visible) {
    return "";
  }
  const classes = boss.disappearing ? "boss disappearing" : "boss";
  return (
    `<div class="${classes}" data-icon="${escapeHtml(boss.iconId)}">` +
    `<span class="boss-icon"></span>` +
    `<blockquote class="taunt">${escapeHtml(boss.taunt)}</blockquote>` +
    `</div>`
  );
}

export function renderRecapModal(recap: RecapView): string {
  return (
    `<dialog class="recap" open>` +
    `<h2>Check results</h2>` +
    `<ul>` +
    `<li data-field="newErrors">New errors: <strong>${recap.newErrors}</strong></li>` +
    `<li data-field="fixedErrors">Fixed errors: <strong>${recap.fixedErrors}</strong></li>` +
    `<li data-field="deltaXp">Obtainable XP: <strong>${escapeHtml(recap.deltaXpText)}</strong></li>` +
    `<li data-field="deltaCompleteness">Completeness: <strong>${escapeHtml(recap.deltaCompletenessText)}</strong></li>` +
    `</ul>` +
    `<p>Now at ${recap.completenessPercent}% completeness, ${recap.obtainableXp} XP obtainable.</p>` +
    `</dialog>`
  );
}

export function renderCompletionModal(view: CompletionView): string {
  const badge = view.multiplierText
    ? `<span class="multiplier">${escapeHtml(view.multiplierText)}</span>`
    : "";
  const props = view.showProps
    ? `<div class="unlocked"><h3>New props unlocked</h3><ul>${view.unlockedProps
        .map((prop) => `<li>${escapeHtml(prop)}</li>`)
        .join("")}</ul></div>`
    : "";
  return (
    `<dialog class="completion" open>` +
    `<h2>Exercise complete!</h2>` +
    `<p class="awarded">+${view.awardedXp} XP ${badge}</p>` +
    `<div class="level-progress" data-percent="${view.progressPercent}">` +
    `<div class="bar" style="width: ${view.progressPercent}%"></div>` +
    `</div>` +
    `<p>Level ${view.newLevel}</p>` +
    props +
    `</dialog>`
  );
}

export function renderExerciseTile(tile: ExerciseTileView): string {
  const classes = tile.golden ? "tile golden" : "tile";
  const badge = tile.badgeIconId
    ? `<span class="badge boss-icon" data-icon="${escapeHtml(tile.badgeIconId)}"></span>`
    : "";
  return (
    `<article class="${classes}" data-exercise="${escapeHtml(tile.exerciseId)}">` +
    `<h3>${escapeHtml(tile.title)}</h3>${badge}` +
    `</article>`
  );
}

export function renderLeaderboard(entries: LeaderboardEntry[], metric: string): string {
  const rows = entries
    .map(
      (entry) =>
        `<tr><td>${entry.rank}</td><td>${escapeHtml(entry.displayName)}</td>` +
        `<td>${escapeHtml(String(entry[metric] ?? ""))}</td>` +
        `<td>${renderAvatar(entry.equippedProps)}</td></tr>`
    )
    .join("");
  return (
    `<table class="leaderboard"><thead><tr><th>#</th><th>Student</th>` +
    `<th>${escapeHtml(metric)}</th><th>Avatar</th></tr></thead><tbody>${rows}</tbody></table>`
  );
}

// One check response -> the whole feedback half of the exercise page.
export function renderCheckOutcome(
  response: CheckResponse,
  summary: ExerciseSummary,
  baseXp: number
): string {
  const pieces = [
    renderMood(response.mood),
    renderIndicators(progressCircles(response, baseXp)),
    renderFeedbackPanels(feedbackPanels(response)),
    renderBoss(bossDisplay(summary, response.completion !== null)),
    renderRecapModal(recapView(response.recap)),
  ];
  if (response.completion) {
    pieces.push(
      renderCompletionModal(completionView(response.completion, response.totalXp, null)),
      renderExerciseTile(exerciseTile({ ...summary, completed: true }))
    );
  }
  return pieces.join("\n");
}
