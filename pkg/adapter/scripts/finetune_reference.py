#!/usr/bin/env python3
"""Reference fine-tuning recipe for an index-generating seq2seq model.

Documented defaults, kept outside the test suite (needs a GPU box and a
prepared corpus): AdamW, learning rate 2e-5, weight decay 1e-4, batch size
8, early stopping after 5 evaluations without validation improvement.

Input files are the `indexqa render` output: JSONL with "input_text" and
"target_text" per line. Example:

    python3 finetune_reference.py --base facebook/bart-base \
        --train train.rendered.jsonl --val val.rendered.jsonl --out ckpt/
"""

import argparse
import json


def read_rendered(path):
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                record = json.loads(line)
                yield record["input_text"], record["target_text"]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--base", default="facebook/bart-base")
    parser.add_argument("--train", required=True)
    parser.add_argument("--val", required=True)
    parser.add_argument("--out", required=True)
    parser.add_argument("--batch-size", type=int, default=8)
    parser.add_argument("--learning-rate", type=float, default=2e-5)
    parser.add_argument("--weight-decay", type=float, default=1e-4)
    parser.add_argument("--patience", type=int, default=5)
    parser.add_argument("--max-epochs", type=int, default=50)
    parser.add_argument("--max-input-tokens", type=int, default=1024)
    parser.add_argument("--max-output-tokens", type=int, default=128)
    args = parser.parse_args()

    import torch
    from torch.utils.data import DataLoader
    from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

    device = "cuda" if torch.cuda.is_available() else "cpu"
    tokenizer = AutoTokenizer.from_pretrained(args.base)
    model = AutoModelForSeq2SeqLM.from_pretrained(args.base).to(device)
    optimizer = torch.optim.AdamW(
        model.parameters(), lr=args.learning_rate, weight_decay=args.weight_decay
    )

    def collate(pairs):
        sources, targets = zip(*pairs)
        batch = tokenizer(
            list(sources), truncation=True, max_length=args.max_input_tokens,
            padding=True, return_tensors="pt",
        )
        labels = tokenizer(
            list(targets), truncation=True, max_length=args.max_output_tokens,
            padding=True, return_tensors="pt",
        ).input_ids
        labels[labels == tokenizer.pad_token_id] = -100
        batch["labels"] = labels
        return {k: v.to(device) for k, v in batch.items()}

    train_pairs = list(read_rendered(args.train))
    val_pairs = list(read_rendered(args.val))
    train_loader = DataLoader(
        train_pairs, batch_size=args.batch_size, shuffle=True, collate_fn=collate
    )
    val_loader = DataLoader(
        val_pairs, batch_size=args.batch_size, collate_fn=collate
    )

    def val_loss() -> float:
        model.eval()
        total, batches = 0.0, 0
        with torch.no_grad():
            for batch in val_loader:
                total += model(**batch).loss.item()
                batches += 1
        return total / max(batches, 1)

    best = float("inf")
    stagnant = 0
    for epoch in range(args.max_epochs):
        model.train()
        for batch in train_loader:
            optimizer.zero_grad()
            model(**batch).loss.backward()
            optimizer.step()
        loss = val_loss()
        print(f"epoch {epoch}: val loss {loss:.4f}")
        if loss < best:
            best = loss
            stagnant = 0
            model.save_pretrained(args.out)
            tokenizer.save_pretrained(args.out)
        else:
            stagnant += 1
            if stagnant >= args.patience:
                print(f"early stop after {args.patience} stagnant evaluations")
                break
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
