// Read-only SVG rendering of a diagram document with feedback overlays.
// Stored geometry (bounds) drives the layout; elements without bounds get
// a simple grid so hand-written documents still render.

import { escapeHtml } from "./format.js";
import { diagramPaint } from "./viewmodel.js";
import type {
  DiagramDocumentJson,
  DiagramElementRecord,
  EvaluationReport,
} from "./types.js";

const MATCH_FILL = "#bbf7d0"; // green background for valid matches
const PLAIN_FILL = "#ffffff";
const TEXT_COLORS = { red: "#dc2626", orange: "#ea580c" } as const;
const STROKE_COLORS = { green: "#16a34a", red: "#dc2626", orange: "#ea580c" } as const;

interface Box {
  x: number;
  y: number;
  width: number;
  height: number;
}

export function parseDocument(text: string): DiagramDocumentJson {
  const raw = JSON.parse(text) as DiagramDocumentJson;
  if (typeof raw !== "object" || raw === null || raw.type !== "UseCaseDiagram") {
    throw new Error("not a use case diagram document");
  }
  return raw;
}

function layout(doc: DiagramDocumentJson): Map<string, Box> {
  const boxes = new Map<string, Box>();
  const ids = Object.keys(doc.elements).sort();
  let fallback = 0;
  for (const id of ids) {
    const element = doc.elements[id];
    const bounds = element.bounds;
    if (
      bounds &&
      [bounds.x, bounds.y, bounds.width, bounds.height].every(
        (v) => typeof v === "number" && Number.isFinite(v)
      )
    ) {
      boxes.set(id, { ...bounds });
    } else {
      boxes.set(id, {
        x: 40 + (fallback % 4) * 190,
        y: 40 + Math.floor(fallback / 4) * 110,
        width: 160,
        height: 70,
      });
      fallback += 1;
    }
  }
  return boxes;
}

function center(box: Box): { x: number; y: number } {
  return { x: box.x + box.width / 2, y: box.y + box.height / 2 };
}

function shape(element: DiagramElementRecord, box: Box, fill: string, textColor: string): string {
  const { x, y } = center(box);
  const name = escapeHtml(element.name || "(unnamed)");
  const label = `<text x="${x}" y="${y}" text-anchor="middle" dominant-baseline="middle" fill="${textColor}" font-size="13">${name}</text>`;
  if (element.type === "UseCase") {
    return (
      `<ellipse cx="${x}" cy="${y}" rx="${box.width / 2}" ry="${box.height / 2}" ` +
      `fill="${fill}" stroke="#1f2937"/>` +
      label
    );
  }
  if (element.type === "UseCaseSystem") {
    const title = `<text x="${box.x + 8}" y="${box.y + 16}" fill="${textColor}" font-size="13" font-weight="bold">${name}</text>`;
    return (
      `<rect x="${box.x}" y="${box.y}" width="${box.width}" height="${box.height}" ` +
      `fill="${fill}" fill-opacity="0.35" stroke="#1f2937"/>` +
      title
    );
  }
  return (
    `<rect x="${box.x}" y="${box.y}" width="${box.width}" height="${box.height}" rx="8" ` +
    `fill="${fill}" stroke="#1f2937"/>` +
    label
  );
}

const RELATION_DASH: Record<string, string> = {
  UseCaseInclude: "6 4",
  UseCaseExtend: "6 4",
};

export function renderDiagram(doc: DiagramDocumentJson, report: EvaluationReport): string {
  const paint = diagramPaint(doc, report);
  const boxes = layout(doc);
  const parts: string[] = [];

  for (const id of Object.keys(doc.relationships).sort()) {
    const relation = doc.relationships[id];
    const from = boxes.get(relation.source.element);
    const to = boxes.get(relation.target.element);
    if (!from || !to) continue;
    const a = center(from);
    const b = center(to);
    const color = paint.relations.get(id);
    const stroke = color ? STROKE_COLORS[color] : "#1f2937";
    const dash = RELATION_DASH[relation.type]
      ? ` stroke-dasharray="${RELATION_DASH[relation.type]}"`
      : "";
    parts.push(
      `<line data-relation="${escapeHtml(id)}" x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}" ` +
        `stroke="${stroke}" stroke-width="2"${dash}/>`
    );
  }

  // systems first so contained elements draw on top of the boundary box
  const ordered = Object.keys(doc.elements).sort((left, right) => {
    const systemFirst =
      Number(doc.elements[right].type === "UseCaseSystem") -
      Number(doc.elements[left].type === "UseCaseSystem");
    return systemFirst !== 0 ? systemFirst : left.localeCompare(right);
  });
  for (const id of ordered) {
    const element = doc.elements[id];
    const box = boxes.get(id)!;
    const elementPaint = paint.elements.get(id)!;
    const fill = elementPaint.background === "green" ? MATCH_FILL : PLAIN_FILL;
    const textColor = elementPaint.text ? TEXT_COLORS[elementPaint.text] : "#111827";
    parts.push(`<g data-element="${escapeHtml(id)}">${shape(element, box, fill, textColor)}</g>`);
  }

  const width = Math.max(...[...boxes.values()].map((b) => b.x + b.width), 400) + 40;
  const height = Math.max(...[...boxes.values()].map((b) => b.y + b.height), 300) + 40;
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
    `width="${width}" height="${height}">` +
    parts.join("") +
    "</svg>"
  );
}
