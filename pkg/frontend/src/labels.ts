/** Fixed vertebra catalog: cervical, thoracic, lumbar, S1. */

function span(prefix: string, count: number): string[] {
  return Array.from({ length: count }, (_, i) => `${prefix}${i + 1}`);
}

export const VERTEBRA_LABELS: readonly string[] = [
  ...span("C", 7),
  ...span("T", 12),
  ...span("L", 5),
  "S1",
];

export function isCatalogLabel(label: string): boolean {
  return VERTEBRA_LABELS.includes(label);
}
