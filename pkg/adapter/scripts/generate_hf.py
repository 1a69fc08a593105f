#!/usr/bin/env python3
"""Checkpoint runner serving the adapter's JSONL protocol.

Loads a seq2seq checkpoint (anything AutoModelForSeq2SeqLM accepts) BEFORE
touching stdin, so a broken checkpoint exits nonzero without consuming any
requests. Then: one {"id", "input_text", "max_output_tokens"?} per line in,
one {"id", "output_text"} per line out, order preserved.
"""

import argparse
import json
import sys


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--checkpoint", required=True)
    parser.add_argument("--strategy", choices=("greedy", "beam"), default="greedy")
    parser.add_argument("--beam-size", type=int, default=1)
    parser.add_argument("--max-output-tokens", type=int, default=64)
    args = parser.parse_args()

    try:
        import torch
        from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

        tokenizer = AutoTokenizer.from_pretrained(args.checkpoint)
        model = AutoModelForSeq2SeqLM.from_pretrained(args.checkpoint)
        model.eval()
    except Exception as exc:  # noqa: BLE001 - any load failure is fatal
        print(f"error: cannot load checkpoint {args.checkpoint!r}: {exc}",
              file=sys.stderr)
        return 1

    num_beams = args.beam_size if args.strategy == "beam" else 1
    for lineno, line in enumerate(sys.stdin, 1):
        if not line.strip():
            continue
        request = json.loads(line)
        max_new = int(request.get("max_output_tokens", args.max_output_tokens))
        inputs = tokenizer(
            request["input_text"], return_tensors="pt",
            truncation=True, max_length=tokenizer.model_max_length,
        )
        with torch.no_grad():
            output_ids = model.generate(
                **inputs, max_new_tokens=max_new,
                num_beams=num_beams, do_sample=False,
            )
        output_text = tokenizer.decode(output_ids[0], skip_special_tokens=True)
        print(json.dumps({"id": request["id"], "output_text": output_text}),
              flush=True)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
