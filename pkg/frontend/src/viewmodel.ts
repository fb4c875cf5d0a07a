// Pure view models: every number displayed comes verbatim from the last
// API response; only display rounding happens here.

import { multiplierBadge, percent, signed, signedPercent } from "./format.js";
import type {
  CheckResponse,
  CompletionResult,
  Diagnostic,
  DiagramDocumentJson,
  EvaluationReport,
  ExerciseSummary,
  MatchedItem,
  Recap,
} from "./types.js";

export interface FeedbackPanels {
  syntactic: Diagnostic[];
  semantic: Diagnostic[];
  matched: MatchedItem[];
}

export function feedbackPanels(response: CheckResponse): FeedbackPanels {
  const { report } = response;
  return {
    syntactic: [...report.syntactic],
    semantic: [...report.semantic],
    matched: [...report.matchedList],
  };
}

export interface ProgressCircle {
  label: string;
  percent: number;
  caption: string;
}

export function progressCircles(response: CheckResponse, baseXp: number): ProgressCircle[] {
  const completeness = percent(response.report.completeness.overall);
  const xp = baseXp > 0 ? percent(response.obtainableXp / baseXp) : 0;
  return [
    {
      label: "Completeness",
      percent: completeness,
      caption: `${completeness}%`,
    },
    {
      label: "Obtainable XP",
      percent: xp,
      caption: `${response.obtainableXp} / ${baseXp} XP`,
    },
  ];
}

export interface RecapView {
  newErrors: number;
  fixedErrors: number;
  deltaXpText: string;
  deltaCompletenessText: string;
  obtainableXp: number;
  completenessPercent: number;
}

export function recapView(recap: Recap): RecapView {
  return {
    newErrors: recap.newErrors,
    fixedErrors: recap.fixedErrors,
    deltaXpText: `${signed(recap.deltaXp)} XP`,
    deltaCompletenessText: signedPercent(recap.deltaCompleteness),
    obtainableXp: recap.obtainableXp,
    completenessPercent: percent(recap.completeness),
  };
}

export interface CompletionView {
  awardedXp: number;
  multiplierText: string | null;
  progressPercent: number;
  newLevel: number;
  unlockedProps: string[];
  showProps: boolean;
}

export function completionView(
  result: CompletionResult,
  totalXp: number,
  nextLevelAt: number | null
): CompletionView {
  const progress =
    nextLevelAt === null || nextLevelAt <= 0
      ? 100
      : Math.min(100, percent(totalXp / nextLevelAt));
  return {
    awardedXp: result.awardedXp,
    multiplierText:
      result.multiplierApplied !== 1 ? multiplierBadge(result.multiplierApplied) : null,
    progressPercent: progress,
    newLevel: result.newLevel,
    unlockedProps: [...result.unlockedProps],
    showProps: result.unlockedProps.length > 0,
  };
}

export interface ExerciseTileView {
  exerciseId: string;
  title: string;
  golden: boolean;
  badgeIconId: string | null;
}

export function exerciseTile(summary: ExerciseSummary): ExerciseTileView {
  return {
    exerciseId: summary.exerciseId,
    title: summary.title,
    golden: summary.completed,
    badgeIconId: summary.completed ? summary.boss.iconId : null,
  };
}

export interface BossDisplay {
  visible: boolean;
  disappearing: boolean;
  iconId: string;
  taunt: string;
}

export function bossDisplay(
  summary: ExerciseSummary,
  justCompleted: boolean
): BossDisplay {
  return {
    visible: !summary.completed || justCompleted,
    disappearing: justCompleted,
    iconId: summary.boss.iconId,
    taunt: summary.boss.taunt,
  };
}

export function avatarLayers(equippedProps: string[]): string[] {
  return ["base", ...[...equippedProps].sort()];
}

// --- diagram coloring -------------------------------------------------------

export type TextColor = "red" | "orange" | null;

export interface ElementPaint {
  background: "green" | null;
  text: TextColor;
}

export interface DiagramPaint {
  elements: Map<string, ElementPaint>;
  relations: Map<string, "green" | "red" | "orange" | null>;
}

// Matched elements get a green background; elements named in semantic
// diagnostics get red text, in syntactic ones orange (red wins when both
// apply). The green background always survives relation-level problems.
export function diagramPaint(doc: DiagramDocumentJson, report: EvaluationReport): DiagramPaint {
  const matchedElements = new Set(Object.values(report.matching.pairs));
  const matchedRelations = new Set(Object.values(report.relationMatching.matchedRelationIds));
  const elementIds = new Set(Object.keys(doc.elements));
  const relationIds = new Set(Object.keys(doc.relationships));

  const elements = new Map<string, ElementPaint>();
  for (const id of elementIds) {
    elements.set(id, { background: matchedElements.has(id) ? "green" : null, text: null });
  }
  const relations = new Map<string, "green" | "red" | "orange" | null>();
  for (const id of relationIds) {
    relations.set(id, matchedRelations.has(id) ? "green" : null);
  }

  const apply = (diags: Diagnostic[], color: "red" | "orange") => {
    for (const diag of diags) {
      for (const subject of diag.subjectIds) {
        if (elementIds.has(subject)) {
          const paint = elements.get(subject)!;
          if (paint.text !== "red") paint.text = color;
        } else if (relationIds.has(subject)) {
          relations.set(subject, color);
        }
      }
    }
  };
  apply(report.syntactic, "orange");
  apply(report.semantic, "red");
  return { elements, relations };
}
