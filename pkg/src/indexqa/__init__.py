"""Index-sequence toolkit for multi-span extractive question answering."""

from .codec import (
    IndexSequence,
    RepairReport,
    Representation,
    decode,
    decode_fi,
    decode_si,
    default_display_offset,
    encode,
    parse_index_text,
    render_context,
)
from .core import (
    AnswerSet,
    Granularity,
    QAInstance,
    Span,
    mask_to_spans,
    merge_spans,
    spans_to_mask,
)
from .datasets import (
    CorpusStats,
    DatasetDescriptor,
    DatasetFormat,
    instance_from_dict,
    instance_to_dict,
    iter_native,
    load,
    save_native,
    sparsity,
)
from .linkback import LinkbackConfig, link_back, overlap_score
from .metrics import (
    PRF,
    Aggregation,
    EvalReport,
    Regime,
    em_prf,
    evaluate_corpus,
    pm_prf,
    unit_prf,
)
from .text import split_sentences, tokenize, tokenize_with_offsets
from .trimming import (
    Dropped,
    TrimResult,
    TrimStats,
    Trimmed,
    corpus_trim_stats,
    trim,
)

__version__ = "0.1.0"

__all__ = [
    "AnswerSet",
    "Aggregation",
    "CorpusStats",
    "DatasetDescriptor",
    "DatasetFormat",
    "Dropped",
    "EvalReport",
    "Granularity",
    "IndexSequence",
    "LinkbackConfig",
    "PRF",
    "QAInstance",
    "Regime",
    "RepairReport",
    "Representation",
    "Span",
    "TrimResult",
    "TrimStats",
    "Trimmed",
    "corpus_trim_stats",
    "decode",
    "decode_fi",
    "decode_si",
    "default_display_offset",
    "em_prf",
    "encode",
    "evaluate_corpus",
    "instance_from_dict",
    "instance_to_dict",
    "iter_native",
    "link_back",
    "load",
    "mask_to_spans",
    "merge_spans",
    "overlap_score",
    "parse_index_text",
    "pm_prf",
    "render_context",
    "save_native",
    "spans_to_mask",
    "sparsity",
    "split_sentences",
    "tokenize",
    "tokenize_with_offsets",
    "trim",
    "unit_prf",
]
