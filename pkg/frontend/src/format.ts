// Display formatting. Rounding is half-up so 0.6667 shows as 67%.

export function roundHalfUp(value: number): number {
  return Math.floor(value + 0.5);
}

export function percent(ratio: number): number {
  return roundHalfUp(ratio * 100);
}

export function signed(value: number): string {
  return value >= 0 ? `+${value}` : `${value}`;
}

export function signedPercent(ratio: number): string {
  const points = percent(Math.abs(ratio));
  return ratio < 0 ? `-${points}%` : `+${points}%`;
}

export function multiplierBadge(factor: number): string {
  return `x${factor}`;
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
