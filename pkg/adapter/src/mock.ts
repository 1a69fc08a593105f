/**
 * Mock model: a fixed id -> output_text table loaded from a JSON file.
 * Lets the full pipeline run end to end with no ML runtime. Ids absent
 * from the table generate an empty string, which downstream decoding
 * turns into an empty answer.
 */

import { readFileSync } from 'node:fs';

export type MockTable = Map<string, string>;

export function loadMockTable(path: string): MockTable {
  const raw: unknown = JSON.parse(readFileSync(path, 'utf8'));
  if (typeof raw !== 'object' || raw === null || Array.isArray(raw)) {
    throw new Error(`${path}: mock table must be a JSON object`);
  }
  const table: MockTable = new Map();
  for (const [id, text] of Object.entries(raw)) {
    if (typeof text !== 'string') {
      throw new Error(`${path}: value for id "${id}" must be a string`);
    }
    table.set(id, text);
  }
  return table;
}
