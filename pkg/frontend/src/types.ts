// Wire types for the grading service API. Field names mirror the JSON
// payloads exactly; the UI never derives game values itself.

export type Severity = "syntactic" | "semantic";

export interface Diagnostic {
  severity: Severity;
  rule: string;
  message: string;
  subjectIds: string[];
  refId: string | null;
}

export interface ElementMatching {
  pairs: Record<string, string>; // refId -> diagram element id
  unmatchedRefs: string[];
  similarityUsed: Record<string, number>;
}

export interface RelationMatching {
  matched: number[];
  unmatched: number[];
  matchedRelationIds: Record<string, string>;
}

export interface KindCount {
  matched: number;
  total: number;
}

export interface CompletenessMetrics {
  perKind: Record<string, KindCount>;
  overall: number;
}

export interface MatchedItem {
  elementId: string;
  refId: string;
  displayName: string;
}

export interface EvaluationReport {
  solutionIndex: number;
  matching: ElementMatching;
  relationMatching: RelationMatching;
  completeness: CompletenessMetrics;
  syntactic: Diagnostic[];
  semantic: Diagnostic[];
  matchedList: MatchedItem[];
}

export interface Recap {
  newErrors: number;
  fixedErrors: number;
  deltaXp: number;
  deltaCompleteness: number;
  obtainableXp: number;
  completeness: number;
}

export interface MoodView {
  index: number;
  label: string;
}

export interface CompletionResult {
  awardedXp: number;
  multiplierApplied: number;
  newLevel: number;
  unlockedProps: string[];
  solutionViewUnlocked: boolean;
}

export interface CheckResponse {
  report: EvaluationReport;
  recap: Recap;
  mood: MoodView;
  obtainableXp: number;
  totalXp: number;
  level: number;
  completion: CompletionResult | null;
}

export interface BossView {
  iconId: string;
  taunt: string;
}

export interface ExerciseSummary {
  exerciseId: string;
  title: string;
  baseXp: number;
  boss: BossView;
  completed: boolean;
}

export interface LeaderboardEntry {
  rank: number;
  studentId: string;
  displayName: string;
  equippedProps: string[];
  [metric: string]: unknown;
}

export interface ExerciseDetail extends ExerciseSummary {
  statement: string;
  checksUsed: number;
  obtainableXp: number;
  leaderboard: LeaderboardEntry[];
}

export interface Profile {
  studentId: string;
  displayName: string;
  totalXp: number;
  level: number;
  nextLevelAt: number | null;
  mood: MoodView;
  ownedProps: string[];
  equippedProps: string[];
  sessions: Record<
    string,
    { checksUsed: number; completed: boolean; lastCompleteness: number; obtainableXp: number }
  >;
}

export interface ApiError {
  error: { code: string; detail: string; [extra: string]: unknown };
}

// The Apollon-shaped diagram document, parsed client-side for rendering only.
export interface DiagramElementRecord {
  id: string;
  type: string;
  name: string;
  owner: string | null;
  bounds?: { x: number; y: number; width: number; height: number };
  [opaque: string]: unknown;
}

export interface DiagramRelationRecord {
  id: string;
  type: string;
  source: { element: string; [opaque: string]: unknown };
  target: { element: string; [opaque: string]: unknown };
  [opaque: string]: unknown;
}

export interface DiagramDocumentJson {
  version: string;
  type: string;
  elements: Record<string, DiagramElementRecord>;
  relationships: Record<string, DiagramRelationRecord>;
  [opaque: string]: unknown;
}
