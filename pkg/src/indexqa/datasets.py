"""Dataset ingestion and corpus statistics.

The native interchange format is JSONL, one instance per line:

    {"id": str, "question": [str], "units": [str],
     "granularity": "token" | "sentence", "gold": [[start, end], ...]}

with 0-based inclusive spans and ``gold`` optional. External dataset
readers are adapters onto this one contract. Each reader pins one
documented file shape and fails loudly, naming the offending record and
field, when the file drifts from it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from statistics import fmean
from typing import Iterable, Iterator, Sequence

from .core import AnswerSet, Granularity, QAInstance, Span
from .text import split_sentences, tokenize, tokenize_with_offsets


class DatasetFormat(Enum):
    MULTISPANQA = "multispanqa"
    BIOASQ = "bioasq"
    MASHQA = "mashqa"
    WIKIQA = "wikiqa"
    NATIVE_JSONL = "native"


_FORMAT_GRANULARITY: dict[DatasetFormat, Granularity | None] = {
    DatasetFormat.MULTISPANQA: Granularity.TOKEN,
    DatasetFormat.BIOASQ: Granularity.TOKEN,
    DatasetFormat.MASHQA: Granularity.SENTENCE,
    DatasetFormat.WIKIQA: Granularity.SENTENCE,
    DatasetFormat.NATIVE_JSONL: None,  # per record
}


@dataclass(frozen=True)
class DatasetDescriptor:
    format: DatasetFormat
    path: str | Path
    granularity: Granularity | None = None

    def __post_init__(self) -> None:
        fixed = _FORMAT_GRANULARITY[self.format]
        if self.granularity is None:
            object.__setattr__(self, "granularity", fixed)
        elif fixed is not None and self.granularity is not fixed:
            raise ValueError(
                f"{self.format.value} data is {fixed.value}-level; "
                f"got granularity {self.granularity.value}"
            )


def _fail(where: str, message: str):
    raise ValueError(f"{where}: {message}")


def _require(record: dict, field: str, where: str):
    if field not in record:
        _fail(where, f"missing field {field!r}")
    return record[field]


def _spans_from_pairs(pairs, n_units: int, where: str) -> AnswerSet:
    try:
        spans = tuple(Span(int(s), int(e)) for s, e in pairs)
        return AnswerSet(spans, n_units)
    except (ValueError, TypeError) as exc:
        _fail(where, f"bad gold spans: {exc}")


def instance_to_dict(inst: QAInstance) -> dict:
    """Native JSONL object for one instance (stable field order)."""
    record = {
        "id": inst.id,
        "question": list(inst.question),
        "units": list(inst.context_units),
        "granularity": inst.granularity.value,
    }
    if inst.gold is not None:
        record["gold"] = [[s.start, s.end] for s in inst.gold.spans]
    return record


def instance_from_dict(record: dict, where: str = "record") -> QAInstance:
    units = _require(record, "units", where)
    granularity_raw = _require(record, "granularity", where)
    try:
        granularity = Granularity(granularity_raw)
    except ValueError:
        _fail(where, f"unknown granularity {granularity_raw!r}")
    gold = None
    if record.get("gold") is not None:
        gold = _spans_from_pairs(record["gold"], len(units), where)
    try:
        return QAInstance(
            id=str(_require(record, "id", where)),
            question=tuple(_require(record, "question", where)),
            context_units=tuple(units),
            granularity=granularity,
            gold=gold,
        )
    except ValueError as exc:
        _fail(where, str(exc))


def iter_native(path: str | Path) -> Iterator[QAInstance]:
    """Stream instances from a native JSONL file."""
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle):
            if not line.strip():
                continue
            where = f"{path} line {lineno + 1}"
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                _fail(where, f"invalid JSON: {exc}")
            yield instance_from_dict(record, where)


def save_native(instances: Iterable[QAInstance], path: str | Path) -> None:
    """Write instances as native JSONL (deterministic bytes)."""
    with open(path, "w", encoding="utf-8") as handle:
        for inst in instances:
            handle.write(json.dumps(instance_to_dict(inst), ensure_ascii=False))
            handle.write("\n")


def _load_multispanqa(path: str | Path) -> list[QAInstance]:
    # Pinned shape: {"data": [{"id", "question": [tokens],
    #                          "context": [tokens], "label": [BIO tags]}]}
    with open(path, encoding="utf-8") as handle:
        doc = json.load(handle)
    instances = []
    for i, record in enumerate(_require(doc, "data", str(path))):
        where = f"{path} data[{i}]"
        context = _require(record, "context", where)
        labels = _require(record, "label", where)
        if len(labels) != len(context):
            _fail(where, f"{len(labels)} labels for {len(context)} context tokens")
        spans = _bio_to_spans(labels, where)
        instances.append(
            QAInstance(
                id=str(_require(record, "id", where)),
                question=tuple(_require(record, "question", where)),
                context_units=tuple(context),
                granularity=Granularity.TOKEN,
                gold=AnswerSet(spans, len(context)),
            )
        )
    return instances


def _bio_to_spans(labels: Sequence[str], where: str) -> tuple[Span, ...]:
    spans = []
    start = None
    for i, tag in enumerate(labels):
        if tag == "B":
            if start is not None:
                spans.append(Span(start, i - 1))
            start = i
        elif tag == "I":
            if start is None:  # lenient: dangling I opens a span
                start = i
        elif tag == "O":
            if start is not None:
                spans.append(Span(start, i - 1))
                start = None
        else:
            _fail(where, f"unknown BIO tag {tag!r} at position {i}")
    if start is not None:
        spans.append(Span(start, len(labels) - 1))
    return tuple(spans)


def _load_bioasq(path: str | Path) -> list[QAInstance]:
    # Pinned shape (SQuAD-style): {"data": [{"paragraphs": [{"context": str,
    #   "qas": [{"id", "question", "answers": [{"text", "answer_start"}]}]}]}]}
    # Answers are character offsets; they are mapped to token spans here.
    with open(path, encoding="utf-8") as handle:
        doc = json.load(handle)
    instances = []
    for i, article in enumerate(_require(doc, "data", str(path))):
        for j, para in enumerate(_require(article, "paragraphs", f"{path} data[{i}]")):
            where = f"{path} data[{i}].paragraphs[{j}]"
            context = _require(para, "context", where)
            token_offsets = tokenize_with_offsets(context)
            tokens = tuple(tok for tok, _, _ in token_offsets)
            for k, qa in enumerate(_require(para, "qas", where)):
                qa_where = f"{where}.qas[{k}]"
                spans = [
                    _char_to_token_span(answer, context, token_offsets, qa_where)
                    for answer in _require(qa, "answers", qa_where)
                ]
                instances.append(
                    QAInstance(
                        id=str(_require(qa, "id", qa_where)),
                        question=tuple(tokenize(_require(qa, "question", qa_where))),
                        context_units=tokens,
                        granularity=Granularity.TOKEN,
                        gold=AnswerSet(tuple(spans), len(tokens)),
                    )
                )
    return instances


def _char_to_token_span(answer: dict, context: str, token_offsets, where: str) -> Span:
    text = _require(answer, "text", where)
    start = _require(answer, "answer_start", where)
    if context[start : start + len(text)] != text:
        _fail(where, f"answer text {text!r} not found at offset {start}")
    end = start + len(text)
    covered = [
        idx
        for idx, (_, ts, te) in enumerate(token_offsets)
        if ts < end and start < te
    ]
    if not covered:
        _fail(where, f"answer at offset {start} covers no tokens")
    return Span(covered[0], covered[-1])


def _load_mashqa(path: str | Path) -> list[QAInstance]:
    # Pinned shape: {"data": [{"paragraphs": [{"sentences": [str] | "context": str,
    #   "qas": [{"id", "question", "answer_sentences": [1-based indexes]}]}]}]}
    # Files carry the 1-based sentence display convention; stored spans are
    # 0-based. Missing "sentences" falls back to the rule-based splitter.
    with open(path, encoding="utf-8") as handle:
        doc = json.load(handle)
    instances = []
    for i, article in enumerate(_require(doc, "data", str(path))):
        for j, para in enumerate(_require(article, "paragraphs", f"{path} data[{i}]")):
            where = f"{path} data[{i}].paragraphs[{j}]"
            if "sentences" in para:
                sentences = tuple(para["sentences"])
            else:
                sentences = tuple(split_sentences(_require(para, "context", where)))
            if not sentences:
                _fail(where, "no sentences")
            for k, qa in enumerate(_require(para, "qas", where)):
                qa_where = f"{where}.qas[{k}]"
                display = _require(qa, "answer_sentences", qa_where)
                internal = [d - 1 for d in display]
                if any(d < 0 for d in internal):
                    _fail(qa_where, f"answer_sentences are 1-based; got {display}")
                try:
                    gold = AnswerSet.from_unit_indexes(internal, len(sentences))
                except ValueError as exc:
                    _fail(qa_where, str(exc))
                instances.append(
                    QAInstance(
                        id=str(_require(qa, "id", qa_where)),
                        question=tuple(tokenize(_require(qa, "question", qa_where))),
                        context_units=sentences,
                        granularity=Granularity.SENTENCE,
                        gold=gold,
                    )
                )
    return instances


_WIKIQA_COLUMNS = [
    "QuestionID", "Question", "DocumentID", "DocumentTitle",
    "SentenceID", "Sentence", "Label",
]


def _load_wikiqa(path: str | Path) -> list[QAInstance]:
    # Pinned shape: the distribution TSV, one candidate sentence per row,
    # Label column 1 marking answer sentences. Consecutive rows sharing a
    # QuestionID form one instance.
    instances = []
    current_id = None
    question = ""
    sentences: list[str] = []
    positive: list[int] = []

    def flush() -> None:
        if current_id is None:
            return
        instances.append(
            QAInstance(
                id=current_id,
                question=tuple(tokenize(question)),
                context_units=tuple(sentences),
                granularity=Granularity.SENTENCE,
                gold=AnswerSet.from_unit_indexes(positive, len(sentences)),
            )
        )

    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle):
            line = line.rstrip("\n")
            if not line:
                continue
            where = f"{path} line {lineno + 1}"
            fields = line.split("\t")
            if len(fields) != len(_WIKIQA_COLUMNS):
                _fail(where, f"expected {len(_WIKIQA_COLUMNS)} columns, got {len(fields)}")
            if lineno == 0 and fields[0] == "QuestionID":
                continue
            qid, qtext, _, _, _, sentence, label = fields
            if label not in ("0", "1"):
                _fail(where, f"Label must be 0 or 1, got {label!r}")
            if qid != current_id:
                flush()
                current_id, question = qid, qtext
                sentences, positive = [], []
            if label == "1":
                positive.append(len(sentences))
            sentences.append(sentence)
    flush()
    return instances


_LOADERS = {
    DatasetFormat.MULTISPANQA: _load_multispanqa,
    DatasetFormat.BIOASQ: _load_bioasq,
    DatasetFormat.MASHQA: _load_mashqa,
    DatasetFormat.WIKIQA: _load_wikiqa,
    DatasetFormat.NATIVE_JSONL: lambda path: list(iter_native(path)),
}


def load(desc: DatasetDescriptor) -> list[QAInstance]:
    """Read the file named by ``desc`` into QA instances."""
    instances = _LOADERS[desc.format](desc.path)
    if desc.format is DatasetFormat.NATIVE_JSONL and desc.granularity is not None:
        for inst in instances:
            if inst.granularity is not desc.granularity:
                raise ValueError(
                    f"instance {inst.id!r} is {inst.granularity.value}-level, "
                    f"descriptor requires {desc.granularity.value}"
                )
    return instances


@dataclass(frozen=True)
class CorpusStats:
    """Label-side corpus statistics. ``label_sparsity`` is the pooled
    fraction of context units that belong to an answer, in [0, 1]."""

    n_instances: int
    n_single_span: int
    n_multi_span: int
    label_sparsity: float
    mean_context_units: float

    def to_json_dict(self) -> dict:
        return {
            "n_instances": self.n_instances,
            "n_single_span": self.n_single_span,
            "n_multi_span": self.n_multi_span,
            "label_sparsity": round(self.label_sparsity, 6),
            "mean_context_units": round(self.mean_context_units, 6),
        }


def sparsity(instances: Sequence[QAInstance]) -> CorpusStats:
    """Compute label sparsity and span-count statistics over gold answers."""
    if not instances:
        return CorpusStats(0, 0, 0, 0.0, 0.0)
    answer_units = 0
    context_units = 0
    n_single = 0
    for inst in instances:
        if inst.gold is None:
            raise ValueError(f"instance {inst.id!r} has no gold answer")
        answer_units += inst.gold.unit_count()
        context_units += inst.n_units
        if len(inst.gold.spans) == 1:
            n_single += 1
    return CorpusStats(
        n_instances=len(instances),
        n_single_span=n_single,
        # zero-span answers land here so the two buckets sum to n_instances
        n_multi_span=len(instances) - n_single,
        label_sparsity=answer_units / context_units,
        mean_context_units=fmean(inst.n_units for inst in instances),
    )
