import { describe, expect, it } from "vitest";

import { renderDiagram } from "../src/diagram.js";
import { escapeHtml } from "../src/format.js";
import {
  renderBoss,
  renderCheckOutcome,
  renderCompletionModal,
  renderExerciseTile,
  renderFeedbackPanels,
  renderIndicators,
  renderRecapModal,
} from "../src/render.js";
import {
  bossDisplay,
  completionView,
  exerciseTile,
  feedbackPanels,
  progressCircles,
  recapView,
} from "../src/viewmodel.js";
import type { CheckResponse, Diagnostic, MatchedItem } from "../src/types.js";
import { buggyDocument, cleanDocument, completedCheck, exerciseDetail, midCheck } from "./fixtures.js";

function countOccurrences(haystack: string, needle: string): number {
  return haystack.split(needle).length - 1;
}

describe("feedback panels (UI contract)", () => {
  it("renders exactly the response's diagnostics and matches", () => {
    const response = midCheck();
    const html = renderFeedbackPanels(feedbackPanels(response));

    expect(html).toContain(`Syntactic errors (${response.report.syntactic.length})`);
    expect(html).toContain(`Semantic errors (${response.report.semantic.length})`);
    expect(html).toContain(`Valid matches (${response.report.matchedList.length})`);
    for (const diag of [...response.report.syntactic, ...response.report.semantic]) {
      expect(countOccurrences(html, diag.message.replace(/"/g, "&quot;"))).toBe(1);
    }
    for (const item of response.report.matchedList) {
      expect(html).toContain(escapeHtml(item.displayName));
    }
    // nothing invented: the list items equal the response's counts
    expect(countOccurrences(html, `<li class="syntactic">`)).toBe(1);
    expect(countOccurrences(html, `<li class="semantic">`)).toBe(2);
    expect(countOccurrences(html, `<li class="matched">`)).toBe(8);
  });

  it("handles the 2 semantic / 1 syntactic / 4 matches example shape", () => {
    const diag = (severity: "syntactic" | "semantic", rule: string): Diagnostic => ({
      severity,
      rule,
      message: `${rule} happened`,
      subjectIds: [],
      refId: null,
    });
    const match = (name: string): MatchedItem => ({
      elementId: name,
      refId: `ref-${name}`,
      displayName: name,
    });
    const response = midCheck();
    response.report.syntactic = [diag("syntactic", "SYN_MISSING_NAME")];
    response.report.semantic = [
      diag("semantic", "SEM_MISSING_ELEMENT"),
      diag("semantic", "SEM_EXTRA_RELATION"),
    ];
    response.report.matchedList = ["a", "b", "c", "d"].map(match);
    const html = renderFeedbackPanels(feedbackPanels(response));
    expect(countOccurrences(html, `<li class="semantic">`)).toBe(2);
    expect(countOccurrences(html, `<li class="syntactic">`)).toBe(1);
    expect(countOccurrences(html, `<li class="matched">`)).toBe(4);
  });
});

describe("progress circles (UI contract)", () => {
  it("shows half-up rounded percentages", () => {
    const response = midCheck();
    response.report.completeness.overall = 0.6667;
    response.obtainableXp = 85;
    const html = renderIndicators(progressCircles(response, 100));
    expect(html).toContain(`data-label="Completeness" data-percent="67"`);
    expect(html).toContain(">67%<");
    expect(html).toContain(`data-label="Obtainable XP" data-percent="85"`);
    expect(html).toContain("85 / 100 XP");
  });
});

describe("recap modal (UI contract)", () => {
  it("shows the four recap numbers verbatim", () => {
    const response = midCheck();
    const html = renderRecapModal(recapView(response.recap));
    expect(html).toContain(`New errors: <strong>${response.recap.newErrors}</strong>`);
    expect(html).toContain(`Fixed errors: <strong>${response.recap.fixedErrors}</strong>`);
    expect(html).toContain(`<strong>-15 XP</strong>`); // deltaXp is -15 in the fixture
    expect(html).toContain(`<strong>+80%</strong>`); // completeness went 0 -> 0.8
  });

  it("renders a synthetic recap exactly", () => {
    const html = renderRecapModal(
      recapView({
        newErrors: 2,
        fixedErrors: 0,
        deltaXp: -10,
        deltaCompleteness: -0.05,
        obtainableXp: 90,
        completeness: 0.75,
      })
    );
    expect(html).toContain("New errors: <strong>2</strong>");
    expect(html).toContain("Fixed errors: <strong>0</strong>");
    expect(html).toContain("<strong>-10 XP</strong>");
    expect(html).toContain("<strong>-5%</strong>");
  });
});

describe("completion (UI contract)", () => {
  it("renders the golden tile with the boss icon", () => {
    const summary = { ...exerciseDetail(), completed: true };
    const html = renderExerciseTile(exerciseTile(summary));
    expect(html).toContain(`class="tile golden"`);
    expect(html).toContain(`data-icon="${summary.boss.iconId}"`);
  });

  it("renders award, multiplier badge, progress bar, and props", () => {
    const response = completedCheck();
    const html = renderCompletionModal(
      completionView(response.completion!, response.totalXp, 250)
    );
    expect(html).toContain("+150 XP");
    expect(html).toContain(`<span class="multiplier">x1.5</span>`);
    expect(html).toContain(`data-percent="60"`);
    expect(html).toContain("<li>hat</li>");
  });

  it("boss disappears with an animation on completion", () => {
    const summary = exerciseDetail();
    const during = renderBoss(bossDisplay({ ...summary, completed: true }, true));
    expect(during).toContain("boss disappearing");
    const after = renderBoss(bossDisplay({ ...summary, completed: true }, false));
    expect(after).toBe("");
    const before = renderBoss(bossDisplay({ ...summary, completed: false }, false));
    expect(before).toContain(summary.boss.taunt);
  });
});

describe("whole-page outcome rendering", () => {
  it("is deterministic for a fixed response", () => {
    const summary = exerciseDetail();
    const first = renderCheckOutcome(midCheck(), summary, summary.baseXp);
    const second = renderCheckOutcome(midCheck(), summary, summary.baseXp);
    expect(first).toBe(second);
  });

  it("includes the completion pieces only when completed", () => {
    const summary = exerciseDetail();
    const mid = renderCheckOutcome(midCheck(), summary, summary.baseXp);
    expect(mid).not.toContain("completion");
    const done = renderCheckOutcome(
      completedCheck(),
      { ...summary, completed: true },
      summary.baseXp
    );
    expect(done).toContain(`class="completion"`);
    expect(done).toContain(`class="tile golden"`);
  });
});

describe("diagram rendering", () => {
  it("colors matched elements green and erroneous ones red/orange", () => {
    const response = midCheck() as CheckResponse;
    const svg = renderDiagram(buggyDocument(), response.report);
    expect(svg).toContain("<svg");
    // matched elements carry the green background fill
    expect(countOccurrences(svg, `fill="#bbf7d0"`)).toBe(
      Object.keys(response.report.matching.pairs).length
    );
    // the unnamed actor's label is orange, the extra relation is red
    expect(svg).toContain(`fill="#ea580c"`);
    expect(svg).toContain(`stroke="#dc2626"`);
  });

  it("renders every element and relation exactly once", () => {
    const doc = cleanDocument();
    const report = completedCheck().report;
    const svg = renderDiagram(doc, report);
    for (const id of Object.keys(doc.elements)) {
      expect(countOccurrences(svg, `data-element="${id}"`)).toBe(1);
    }
    for (const id of Object.keys(doc.relationships)) {
      expect(countOccurrences(svg, `data-relation="${id}"`)).toBe(1);
    }
  });
});
