"""Experiment-trend checks on the bundled synthetic corpus (TEMPCR_RUN_SLOW=1)."""

from statistics import mean

import pytest

from tempcr.services.corpus.preprocess import PreprocessConfig, tokenize_texts
from tempcr.services.corpus.sgdata import SgMode, build_sg_dataset
from tempcr.services.corpus.synthetic import generate_synthetic, load_synth_spec
from tempcr.services.corpus.vocab import build_vocab
from tempcr.services.trainer import (
    Experiment,
    TrainConfig,
    TrainingSetting,
    pretrain_sg,
    sweep_lambda,
    sweep_train_size,
)
from tempcr.services.trainer.sweeps import LAMBDA_GRID
from tempcr.tests.helpers import slow

SEEDS = (1, 2, 3)


def _experiment(config: TrainConfig, seed: int) -> Experiment:
    generated = generate_synthetic(load_synth_spec(), seed=seed)
    train_corpus = generated.split("train")
    vocab = build_vocab(train_corpus, generated.raw_texts, PreprocessConfig())
    texts = [list(document.surfaces) for document in train_corpus.documents]
    texts.extend(tokenize_texts(generated.raw_texts, PreprocessConfig()))
    sg_datasets = {mode: build_sg_dataset(texts, vocab, window=config.window, mode=mode) for mode in SgMode}
    pretrained = pretrain_sg(
        sg_datasets[SgMode.SG], len(vocab), config.embed_dim, epochs=config.sg_pretrain_epochs, seed=seed
    )
    return Experiment(
        train_corpus=train_corpus,
        eval_corpus=generated.split("dev"),
        vocab=vocab,
        sg_datasets=sg_datasets,
        pretrained=pretrained,
    )


@pytest.fixture(scope="module")
def trend_config(smoke_config):
    return TrainConfig.from_config(smoke_config, min_epochs=10, max_epochs=40, patience=10, sg_pretrain_epochs=5)


@slow
def test_joint_settings_beat_pretrained_initialisation(trend_config):
    scores = {setting: [] for setting in TrainingSetting}
    for seed in SEEDS:
        experiment = _experiment(trend_config, seed)
        for row in sweep_train_size(experiment, trend_config.with_overrides(seed=seed), fractions=(1.0,)):
            scores[TrainingSetting(row["setting"])].append(row["F"])
    average = {setting: mean(values) for setting, values in scores.items()}

    assert average[TrainingSetting.RC_RANDOM] < average[TrainingSetting.RC_SG_INIT]
    joint = max(average[TrainingSetting.RC_SG], average[TrainingSetting.RC_SGLR])
    single = max(average[TrainingSetting.RC_SG_INIT], average[TrainingSetting.RC_SG_FIXED])
    assert joint >= single + 0.01


@slow
def test_balanced_lambda_beats_grid_extremes(trend_config):
    config = trend_config.with_overrides(setting=TrainingSetting.RC_SG)
    by_value = {value: [] for value in LAMBDA_GRID}
    for seed in SEEDS:
        for row in sweep_lambda(_experiment(config, seed), config.with_overrides(seed=seed)):
            by_value[row["x"]].append(row["F"])
    average = {value: mean(values) for value, values in by_value.items()}

    best = max(average.values())
    assert best > average[LAMBDA_GRID[0]]
    assert best > average[LAMBDA_GRID[-1]]
