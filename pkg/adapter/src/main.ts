/**
 * indexqa-adapter: JSONL over stdin/stdout between the toolkit and a
 * seq2seq generator.
 *
 * Modes (exactly one):
 *   --mock <table.json>        fixed id -> output_text table
 *   --checkpoint <path>        real model, delegated to the bundled
 *                              Python runner (needs transformers + torch)
 *
 * The model (or table) is loaded before any request is read, so a load
 * failure exits nonzero without consuming input.
 */

import { spawn } from 'node:child_process';
import { createInterface } from 'node:readline';
import { fileURLToPath } from 'node:url';
import { parseArgs } from 'node:util';

import { loadMockTable } from './mock.js';
import { parseRequest, serializeResponse } from './protocol.js';

const USAGE =
  'usage: indexqa-adapter (--mock TABLE.json | --checkpoint PATH) ' +
  '[--strategy greedy|beam] [--beam-size N] [--max-output-tokens N]';

async function runMock(tablePath: string): Promise<number> {
  const table = loadMockTable(tablePath);
  const lines = createInterface({ input: process.stdin });
  let lineno = 0;
  for await (const line of lines) {
    lineno += 1;
    if (!line.trim()) continue;
    const request = parseRequest(line, lineno);
    process.stdout.write(
      serializeResponse({
        id: request.id,
        output_text: table.get(request.id) ?? '',
      })
    );
  }
  return 0;
}

function runCheckpoint(
  checkpoint: string,
  strategy: string,
  beamSize: string,
  maxOutputTokens: string
): Promise<number> {
  const runner = fileURLToPath(
    new URL('../scripts/generate_hf.py', import.meta.url)
  );
  const child = spawn(
    'python3',
    [
      runner,
      '--checkpoint', checkpoint,
      '--strategy', strategy,
      '--beam-size', beamSize,
      '--max-output-tokens', maxOutputTokens,
    ],
    { stdio: ['inherit', 'inherit', 'inherit'] }
  );
  return new Promise((resolve) => {
    child.on('error', (err) => {
      process.stderr.write(`error: cannot start runner: ${err.message}\n`);
      resolve(1);
    });
    child.on('close', (code) => resolve(code ?? 1));
  });
}

async function main(): Promise<number> {
  let values;
  try {
    values = parseArgs({
      options: {
        mock: { type: 'string' },
        checkpoint: { type: 'string' },
        strategy: { type: 'string', default: 'greedy' },
        'beam-size': { type: 'string', default: '1' },
        'max-output-tokens': { type: 'string', default: '64' },
      },
    }).values;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n${USAGE}\n`);
    return 1;
  }
  if ((values.mock === undefined) === (values.checkpoint === undefined)) {
    process.stderr.write(`error: pass exactly one of --mock / --checkpoint\n${USAGE}\n`);
    return 1;
  }
  if (values.strategy !== 'greedy' && values.strategy !== 'beam') {
    process.stderr.write(`error: unknown strategy "${values.strategy}"\n`);
    return 1;
  }
  if (values.mock !== undefined) {
    return runMock(values.mock);
  }
  return runCheckpoint(
    values.checkpoint as string,
    values.strategy as string,
    values['beam-size'] as string,
    values['max-output-tokens'] as string
  );
}

main()
  .catch((err: Error) => {
    process.stderr.write(`error: ${err.message}\n`);
    return 1;
  })
  .then((code) => {
    process.exitCode = code;
  });
