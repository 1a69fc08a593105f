/**
 * JSONL generation protocol over stdin/stdout.
 *
 * One request object per line in, one response object per line out.
 * Responses preserve request ids one to one, in request order.
 */

export interface GenerationRequest {
  id: string;
  input_text: string;
  max_output_tokens?: number;
}

export interface GenerationResponse {
  id: string;
  output_text: string;
}

export function parseRequest(line: string, lineno: number): GenerationRequest {
  let raw: unknown;
  try {
    raw = JSON.parse(line);
  } catch {
    throw new Error(`line ${lineno}: invalid JSON`);
  }
  if (typeof raw !== 'object' || raw === null) {
    throw new Error(`line ${lineno}: request must be an object`);
  }
  const record = raw as Record<string, unknown>;
  if (typeof record.id !== 'string') {
    throw new Error(`line ${lineno}: missing string field "id"`);
  }
  if (typeof record.input_text !== 'string') {
    throw new Error(`line ${lineno}: missing string field "input_text"`);
  }
  const request: GenerationRequest = {
    id: record.id,
    input_text: record.input_text,
  };
  if (record.max_output_tokens !== undefined) {
    if (typeof record.max_output_tokens !== 'number') {
      throw new Error(`line ${lineno}: "max_output_tokens" must be a number`);
    }
    request.max_output_tokens = record.max_output_tokens;
  }
  return request;
}

export function serializeResponse(response: GenerationResponse): string {
  return JSON.stringify(response) + '\n';
}
