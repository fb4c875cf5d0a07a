import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { CheckResponse, DiagramDocumentJson, ExerciseDetail, Profile } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

function load<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, "fixtures", name), "utf-8")) as T;
}

// Captured from the running grading service (see fixtures/*.json):
// a mid-exercise check with 1 syntactic + 2 semantic errors, and a
// completing check with the first-try multiplier.
export const midCheck = (): CheckResponse => load("check_mid.json");
export const completedCheck = (): CheckResponse => load("check_completed.json");
export const exerciseDetail = (): ExerciseDetail => load("exercise_detail.json");
export const profile = (): Profile => load("profile.json");
export const buggyDocument = (): DiagramDocumentJson =>
  JSON.parse(readFileSync(join(here, "fixtures", "document_buggy.json"), "utf-8"));
export const cleanDocument = (): DiagramDocumentJson =>
  JSON.parse(readFileSync(join(here, "fixtures", "document_clean.json"), "utf-8"));
