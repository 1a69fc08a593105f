from pathlib import Path

import pytest

from indexqa import (
    AnswerSet,
    DatasetDescriptor,
    DatasetFormat,
    Granularity,
    QAInstance,
    Span,
    load,
    save_native,
)

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def clinical_instance() -> QAInstance:
    """Sentence-granularity golden fixture: 18 sentences, answer sentences
    1, 4, 5, 7 in 1-based display indexing."""
    instances = load(
        DatasetDescriptor(DatasetFormat.MASHQA, DATA_DIR / "mashqa_clinical.json")
    )
    assert len(instances) == 1
    return instances[0]


@pytest.fixture(scope="session")
def cricket_instance() -> QAInstance:
    """Token-granularity golden fixture: 125 tokens, answer tokens 15 and 27."""
    instances = load(
        DatasetDescriptor(
            DatasetFormat.MULTISPANQA, DATA_DIR / "multispanqa_cricket.json"
        )
    )
    assert len(instances) == 1
    return instances[0]


def _extra_sentence_instance() -> QAInstance:
    return QAInstance(
        id="gardening-1",
        question=("when", "should", "tomatoes", "be", "planted", "?"),
        context_units=(
            "Tomatoes grow best in warm soil.",
            "Plant seedlings outdoors after the last frost has passed.",
            "Water deeply twice a week.",
            "Harvest when the fruit is fully colored.",
        ),
        granularity=Granularity.SENTENCE,
        gold=AnswerSet((Span(1, 1),), 4),
    )


def _extra_token_instance() -> QAInstance:
    tokens = "The museum opened in 1892 and was rebuilt in 1951 .".split()
    return QAInstance(
        id="museum-1",
        question=("when", "did", "the", "museum", "open", "?"),
        context_units=tuple(tokens),
        granularity=Granularity.TOKEN,
        gold=AnswerSet((Span(4, 4), Span(9, 9)), len(tokens)),
    )


@pytest.fixture()
def sentence_corpus_path(tmp_path, clinical_instance) -> Path:
    path = tmp_path / "sentence_corpus.jsonl"
    save_native([clinical_instance, _extra_sentence_instance()], path)
    return path


@pytest.fixture()
def token_corpus_path(tmp_path, cricket_instance) -> Path:
    path = tmp_path / "token_corpus.jsonl"
    save_native([cricket_instance, _extra_token_instance()], path)
    return path
