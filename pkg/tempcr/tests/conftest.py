from __future__ import annotations

import pytest

from tempcr.app.config import SmokeConfig
from tempcr.services.corpus.preprocess import PreprocessConfig
from tempcr.services.corpus.synthetic import SyntheticCorpus, generate_synthetic
from tempcr.services.corpus.vocab import Vocabulary, build_vocab
from tempcr.tests.helpers import tiny_spec


@pytest.fixture(scope="session")
def smoke_config() -> SmokeConfig:
    return SmokeConfig()


@pytest.fixture(scope="session")
def tiny_synthetic() -> SyntheticCorpus:
    return generate_synthetic(tiny_spec(), seed=3)


@pytest.fixture(scope="session")
def tiny_vocab(tiny_synthetic: SyntheticCorpus) -> Vocabulary:
    return build_vocab(tiny_synthetic.split("train"), tiny_synthetic.raw_texts, PreprocessConfig())
