"""Command-line pipelines: prepare model inputs, repair predictions, trim,
evaluate, and report corpus statistics over native JSONL corpora.

Every subcommand is a pure function of its input files and flags, so
repeated runs produce byte-identical outputs. Exit codes: 0 success,
1 usage error, 2 data error. Partially written outputs are removed on
failure. The INDEXQA_CONFIG environment variable may name a JSON file of
flag defaults (command line wins over config, config over built-ins).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager
from dataclasses import asdict
from pathlib import Path
from typing import Iterator

from .codec import (
    Representation,
    decode,
    default_display_offset,
    encode,
    parse_index_text,
    render_context,
)
from .core import AnswerSet, Granularity, QAInstance, Span
from .datasets import instance_from_dict, instance_to_dict, iter_native, sparsity
from .linkback import LinkbackConfig, link_back
from .metrics import Aggregation, Regime, evaluate_corpus
from .trimming import Dropped, TrimTally, trim

DEFAULT_TEMPLATE = "question: {question} context: {context}"
DEFAULT_BUDGET = 1024
CONFIG_ENV_VAR = "INDEXQA_CONFIG"

_REGIMES = {
    "sentence": Regime.SENTENCE_LEVEL,
    "token": Regime.TOKEN_LEVEL,
    "em": Regime.EXACT_MATCH,
    "pm": Regime.PARTIAL_MATCH,
}
_AGGREGATIONS = {
    "macro": Aggregation.MACRO_OVER_INSTANCES,
    "micro": Aggregation.MICRO_OVER_SPANS,
}


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; this toolkit reserves 2 for data
    # errors and uses 1 for usage.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@contextmanager
def _remove_on_error(*paths: str | Path | None):
    try:
        yield
    except BaseException:
        for path in paths:
            if path is not None:
                Path(path).unlink(missing_ok=True)
        raise


def _iter_jsonl(path: str | Path) -> Iterator[tuple[str, dict]]:
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            if not line.strip():
                continue
            where = f"{path} line {lineno}"
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{where}: invalid JSON: {exc}") from None
            yield where, record


def _field(record: dict, key: str, where: str):
    if key not in record:
        raise ValueError(f"{where}: missing field {key!r}")
    return record[key]


def _context_map(path: str | Path) -> dict[str, QAInstance]:
    contexts = {}
    for inst in iter_native(path):
        if inst.id in contexts:
            raise ValueError(f"duplicate context id {inst.id!r} in {path}")
        contexts[inst.id] = inst
    return contexts


def _resolve_offset(flag_value: int | None, inst: QAInstance) -> int:
    if flag_value is not None:
        return flag_value
    return default_display_offset(inst.granularity)


def _spans_json(answer: AnswerSet) -> list[list[int]]:
    return [[span.start, span.end] for span in answer.spans]


def _answer_from_record(record: dict, n_units: int, where: str) -> AnswerSet:
    try:
        pairs = _field(record, "spans", where)
        return AnswerSet(tuple(Span(int(s), int(e)) for s, e in pairs), n_units)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{where}: bad spans: {exc}") from None


# --- subcommands -----------------------------------------------------------


def _cmd_render(args, cfg) -> int:
    template = args.template or cfg.get("template", DEFAULT_TEMPLATE)
    if "{question}" not in template or "{context}" not in template:
        raise ValueError("template must contain {question} and {context}")
    rep = Representation(args.rep or cfg.get("rep", "fi"))
    offset = args.offset if args.offset is not None else cfg.get("offset")
    meta_path = f"{args.output}.meta.json"
    with _remove_on_error(args.output, meta_path):
        with open(args.output, "w", encoding="utf-8") as out:
            for inst in iter_native(args.input):
                off = _resolve_offset(offset, inst)
                context = render_context(
                    inst, with_index=not args.no_index, display_offset=off
                )
                record = {
                    "id": inst.id,
                    "input_text": template.format(
                        question=" ".join(inst.question), context=context
                    ),
                    "target_text": (
                        encode(inst.gold, rep, off).to_text()
                        if inst.gold is not None
                        else ""
                    ),
                }
                out.write(json.dumps(record, ensure_ascii=False) + "\n")
        meta = {
            "subcommand": "render",
            "template": template,
            "representation": rep.value,
            "display_offset": offset,
            "with_index": not args.no_index,
        }
        Path(meta_path).write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    return 0


def _cmd_encode(args, cfg) -> int:
    rep = Representation(args.rep or cfg.get("rep", "fi"))
    offset = args.offset if args.offset is not None else cfg.get("offset")
    with _remove_on_error(args.output):
        with open(args.output, "w", encoding="utf-8") as out:
            for inst in iter_native(args.input):
                sequence = ""
                if inst.gold is not None:
                    sequence = encode(
                        inst.gold, rep, _resolve_offset(offset, inst)
                    ).to_text()
                out.write(
                    json.dumps({"id": inst.id, "sequence": sequence}) + "\n"
                )
    return 0


def _cmd_decode(args, cfg) -> int:
    rep = Representation(args.rep or cfg.get("rep", "fi"))
    offset = args.offset if args.offset is not None else cfg.get("offset")
    contexts = _context_map(args.contexts)
    with _remove_on_error(args.output):
        with open(args.output, "w", encoding="utf-8") as out:
            for where, record in _iter_jsonl(args.input):
                pred_id = str(_field(record, "id", where))
                inst = contexts.get(pred_id)
                if inst is None:
                    raise ValueError(f"{where}: id {pred_id!r} not in contexts")
                seq = parse_index_text(
                    str(_field(record, "raw", where)),
                    rep,
                    inst.n_units,
                    _resolve_offset(offset, inst),
                )
                answer, report = decode(seq)
                out.write(
                    json.dumps(
                        {
                            "id": pred_id,
                            "spans": _spans_json(answer),
                            "repair_report": asdict(report),
                        }
                    )
                    + "\n"
                )
    return 0


def _cmd_trim(args, cfg) -> int:
    budget = args.budget if args.budget is not None else cfg.get("budget", DEFAULT_BUDGET)
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    stats_path = args.stats_out or f"{args.output}.stats.json"
    tally = TrimTally()
    with _remove_on_error(args.output, stats_path):
        with open(args.output, "w", encoding="utf-8") as out:
            for inst in iter_native(args.input):
                result = trim(inst, budget)
                tally.add(inst, result)
                if isinstance(result, Dropped):
                    continue
                out.write(
                    json.dumps(
                        instance_to_dict(result.instance), ensure_ascii=False
                    )
                    + "\n"
                )
        stats = tally.stats()
        Path(stats_path).write_text(
            json.dumps(
                {
                    "pct_instances_trimmed": round(stats.pct_instances_trimmed, 6),
                    "pct_units_removed": round(stats.pct_units_removed, 6),
                    "n_dropped": stats.n_dropped,
                },
                indent=2,
            )
            + "\n",
            encoding="utf-8",
        )
    return 0


def _load_eval_side(path: str | Path, contexts: dict[str, QAInstance]):
    """Read an eval input: native corpus lines (with gold) or {id, spans}
    lines resolved against known contexts. Returns (ordered ids,
    id -> AnswerSet, id -> Granularity, corpus instances encountered)."""
    ids: list[str] = []
    answers: dict[str, AnswerSet] = {}
    granularities: dict[str, Granularity] = {}
    instances: dict[str, QAInstance] = {}
    for where, record in _iter_jsonl(path):
        if "units" in record:
            inst = instance_from_dict(record, where)
            if inst.gold is None:
                raise ValueError(f"{where}: instance {inst.id!r} has no gold")
            rec_id, answer, gran = inst.id, inst.gold, inst.granularity
            instances[rec_id] = inst
        else:
            rec_id = str(_field(record, "id", where))
            inst = contexts.get(rec_id)
            if inst is None:
                raise ValueError(
                    f"{where}: no context for id {rec_id!r} "
                    f"(provide --contexts or corpus-shaped gold)"
                )
            answer = _answer_from_record(record, inst.n_units, where)
            gran = inst.granularity
        if rec_id in answers:
            raise ValueError(f"{where}: duplicate id {rec_id!r}")
        ids.append(rec_id)
        answers[rec_id] = answer
        granularities[rec_id] = gran
    return ids, answers, granularities, instances


def _cmd_eval(args, cfg) -> int:
    regime_name = args.regime or cfg.get("regime")
    if regime_name not in _REGIMES:
        raise ValueError(f"unknown regime {regime_name!r}")
    regime = _REGIMES[regime_name]
    aggregation = None
    agg_name = args.aggregation or cfg.get("aggregation")
    if agg_name is not None:
        if agg_name not in _AGGREGATIONS:
            raise ValueError(f"unknown aggregation {agg_name!r}")
        aggregation = _AGGREGATIONS[agg_name]
    contexts = _context_map(args.contexts) if args.contexts else {}
    gold_ids, gold_answers, gold_grans, gold_insts = _load_eval_side(
        args.gold, contexts
    )
    # Corpus-shaped gold lines double as contexts for span-only predictions.
    _, pred_answers, _, _ = _load_eval_side(args.pred, {**contexts, **gold_insts})

    grans = set(gold_grans.values())
    if len(grans) > 1:
        raise ValueError("eval corpus mixes granularities")
    pairs = []
    for gid in gold_ids:
        if gid not in pred_answers:
            raise ValueError(f"no prediction for id {gid!r}")
        pairs.append((pred_answers[gid], gold_answers[gid], gid))
    report = evaluate_corpus(pairs, regime, aggregation)
    payload = json.dumps(report.to_json_dict(), indent=2) + "\n"
    if args.output:
        with _remove_on_error(args.output):
            Path(args.output).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return 0


def _cmd_stats(args, cfg) -> int:
    stats = sparsity(list(iter_native(args.input)))
    payload = json.dumps(stats.to_json_dict(), indent=2) + "\n"
    if args.output:
        with _remove_on_error(args.output):
            Path(args.output).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return 0


def _cmd_linkback(args, cfg) -> int:
    delta = args.delta if args.delta is not None else cfg.get("delta", 0.05)
    link_cfg = LinkbackConfig(
        delta=delta,
        normalize=not args.no_normalize,
        lowercase=not args.no_lowercase,
    )
    contexts = _context_map(args.contexts)
    with _remove_on_error(args.output):
        with open(args.output, "w", encoding="utf-8") as out:
            for where, record in _iter_jsonl(args.input):
                pred_id = str(_field(record, "id", where))
                inst = contexts.get(pred_id)
                if inst is None:
                    raise ValueError(f"{where}: id {pred_id!r} not in contexts")
                answer = link_back(str(_field(record, "text", where)), inst, link_cfg)
                out.write(
                    json.dumps({"id": pred_id, "spans": _spans_json(answer)}) + "\n"
                )
    return 0


# --- parser ----------------------------------------------------------------


def _add_offset_flag(sub) -> None:
    sub.add_argument(
        "--offset",
        type=int,
        choices=(0, 1),
        default=None,
        help="display offset; default 1 for sentence data, 0 for token data",
    )


def _add_rep_flag(sub) -> None:
    sub.add_argument(
        "--rep",
        choices=("fi", "si"),
        default=None,
        help="index representation: full index (fi) or span index (si)",
    )


def build_parser() -> _Parser:
    parser = _Parser(
        prog="indexqa",
        description="Index-sequence pipelines for multi-span extractive QA.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    render = sub.add_parser("render", help="emit model input/target text")
    render.add_argument("--input", required=True, help="native JSONL corpus")
    render.add_argument("--output", required=True)
    _add_rep_flag(render)
    _add_offset_flag(render)
    render.add_argument("--no-index", action="store_true",
                        help="omit index markers from the context (ablation)")
    render.add_argument("--template", default=None,
                        help="input template with {question} and {context}")
    render.set_defaults(func=_cmd_render)

    enc = sub.add_parser("encode", help="encode gold answers as index text")
    enc.add_argument("--input", required=True, help="native JSONL corpus")
    enc.add_argument("--output", required=True)
    _add_rep_flag(enc)
    _add_offset_flag(enc)
    enc.set_defaults(func=_cmd_encode)

    dec = sub.add_parser("decode", help="repair raw index text into spans")
    dec.add_argument("--input", required=True, help="JSONL of {id, raw}")
    dec.add_argument("--contexts", required=True, help="native JSONL corpus")
    dec.add_argument("--output", required=True)
    _add_rep_flag(dec)
    _add_offset_flag(dec)
    dec.set_defaults(func=_cmd_decode)

    tr = sub.add_parser("trim", help="fit contexts into a token budget")
    tr.add_argument("--input", required=True, help="native JSONL corpus")
    tr.add_argument("--output", required=True, help="trimmed native JSONL")
    tr.add_argument("--budget", type=int, default=None,
                    help=f"token budget (default {DEFAULT_BUDGET})")
    tr.add_argument("--stats-out", default=None,
                    help="stats JSON path (default <output>.stats.json)")
    tr.set_defaults(func=_cmd_trim)

    ev = sub.add_parser("eval", help="score predictions against gold")
    ev.add_argument("--pred", required=True, help="JSONL of {id, spans}")
    ev.add_argument("--gold", required=True,
                    help="native corpus with gold, or JSONL of {id, spans}")
    ev.add_argument("--contexts", default=None,
                    help="native corpus for unit counts of span-only inputs")
    ev.add_argument("--regime", choices=sorted(_REGIMES), default=None)
    ev.add_argument("--aggregation", choices=sorted(_AGGREGATIONS), default=None,
                    help="default: macro for sentence/token, micro for em/pm")
    ev.add_argument("--output", default=None, help="default: stdout")
    ev.set_defaults(func=_cmd_eval)

    st = sub.add_parser("stats", help="corpus label statistics")
    st.add_argument("--input", required=True, help="native JSONL corpus")
    st.add_argument("--output", default=None, help="default: stdout")
    st.set_defaults(func=_cmd_stats)

    lb = sub.add_parser("linkback", help="map generated answers to sentences")
    lb.add_argument("--input", required=True, help="JSONL of {id, text}")
    lb.add_argument("--contexts", required=True,
                    help="sentence-granularity native JSONL corpus")
    lb.add_argument("--output", required=True)
    lb.add_argument("--delta", type=float, default=None,
                    help="score tolerance below the maximum (default 0.05)")
    lb.add_argument("--no-normalize", action="store_true",
                    help="use raw overlap counts instead of ratios")
    lb.add_argument("--no-lowercase", action="store_true",
                    help="match tokens case-sensitively")
    lb.set_defaults(func=_cmd_linkback)
    return parser


def _load_config() -> dict:
    path = os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return {}
    with open(path, encoding="utf-8") as handle:
        cfg = json.load(handle)
    if not isinstance(cfg, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return int(exit_.code or 0)
    try:
        cfg = _load_config()
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if getattr(args, "regime", "") is None and "regime" not in cfg:
        print("error: eval requires --regime", file=sys.stderr)
        return 1
    try:
        return args.func(args, cfg)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    raise SystemExit(main(sys.argv[1:]))


if __name__ == "__main__":
    entrypoint()
