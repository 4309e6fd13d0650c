import unittest
from types import SimpleNamespace
from unittest import mock

import numpy as np
import pytest

from tempcr.services.corpus.preprocess import PreprocessConfig
from tempcr.services.corpus.sgdata import SgMode, build_sg_dataset
from tempcr.services.corpus.synthetic import generate_synthetic, load_synth_spec
from tempcr.services.corpus.vocab import Vocabulary, build_vocab
from tempcr.services.errors import TrainingError
from tempcr.services.evaluation import Metrics
from tempcr.services.models.checkpoint import save_checkpoint
from tempcr.services.models.rc import TOKEN_TABLE
from tempcr.services.neural.layers import uniform_init
from tempcr.services.trainer import (
    CyclingSampler,
    EpochSampler,
    Experiment,
    TrainConfig,
    TrainingSetting,
    derive_seed,
    epoch_batches,
    evaluate_model,
    load_trained_model,
    measure_gradient_dominance,
    prepare_rc_data,
    pretrain_sg,
    split_validation,
    sweep_lambda,
    sweep_train_size,
    train,
)
from tempcr.services.trainer.data import prefix_documents
from tempcr.services.trainer.scoring import predict_probabilities
from tempcr.tests.helpers import make_corpus, make_document, slow


class SamplerTestCase(unittest.TestCase):
    def test_epoch_partition(self) -> None:
        batches = epoch_batches(10, 4, np.random.default_rng(0))

        self.assertEqual([len(batch) for batch in batches], [4, 4, 2])
        self.assertEqual(sorted(np.concatenate(batches).tolist()), list(range(10)))

    def test_epoch_sampler_is_reproducible(self) -> None:
        first = EpochSampler(7, 3, np.random.default_rng(4))
        second = EpochSampler(7, 3, np.random.default_rng(4))

        for _ in range(2):
            for left, right in zip(first.epoch(), second.epoch()):
                np.testing.assert_array_equal(left, right)

    def test_cycling_sampler_wraps_into_next_shuffle(self) -> None:
        sampler = CyclingSampler(5, 4, np.random.default_rng(1))

        first = sampler.draw()
        second = sampler.draw()

        self.assertEqual(len(second), 4)
        self.assertEqual(sorted(np.concatenate([first, second[:1]]).tolist()), list(range(5)))
        self.assertEqual(sampler.batches_drawn, 2)

    def test_empty_dataset(self) -> None:
        with self.assertRaises(TrainingError):
            epoch_batches(0, 4, np.random.default_rng(0))
        with self.assertRaises(TrainingError):
            CyclingSampler(0, 4, np.random.default_rng(0))


class TrainConfigTestCase(unittest.TestCase):
    def test_profile_values_then_overrides(self) -> None:
        profile = SimpleNamespace(BATCH_SIZE=32, PATIENCE=4)

        config = TrainConfig.from_config(profile, patience=None, setting="rc+sglr", lambda_sg=1.0)

        self.assertEqual(config.batch_size, 32)
        self.assertEqual(config.patience, 4)
        self.assertIs(config.setting, TrainingSetting.RC_SGLR)
        self.assertEqual(config.as_dict()["setting"], "rc+sglr")

    def test_invalid_values(self) -> None:
        with self.assertRaises(TrainingError):
            TrainConfig().with_overrides(patience=0)
        with self.assertRaises(TrainingError):
            TrainConfig().with_overrides(dropout=1.0)
        with self.assertRaises(TrainingError):
            TrainConfig().with_overrides(lambda_sg=-1.0)

    def test_setting_properties(self) -> None:
        self.assertFalse(TrainingSetting.RC_RANDOM.uses_pretrained)
        self.assertTrue(TrainingSetting.RC_SG_FIXED.freezes_embeddings)
        self.assertIs(TrainingSetting.RC_SGLR.sg_mode, SgMode.SGLR)
        self.assertEqual(
            [setting for setting in TrainingSetting if setting.joint],
            [TrainingSetting.RC_SG, TrainingSetting.RC_SGLR],
        )


class DocumentSplitTestCase(unittest.TestCase):
    def setUp(self) -> None:
        self.corpus = make_corpus(*(make_document(name, ["w"]) for name in ("d3", "d1", "d4", "d2", "d0")))

    def test_validation_takes_lexicographically_first(self) -> None:
        training, validation = split_validation(self.corpus, 2)

        self.assertEqual([doc.id for doc in validation.documents], ["d1", "d0"])
        self.assertEqual([doc.id for doc in training.documents], ["d3", "d4", "d2"])

    def test_validation_must_leave_training_documents(self) -> None:
        with self.assertRaises(TrainingError):
            split_validation(self.corpus, 5)

    def test_prefix_rounds_up(self) -> None:
        self.assertEqual(len(prefix_documents(self.corpus, 0.2)), 1)
        self.assertEqual(len(prefix_documents(self.corpus, 0.5)), 3)
        self.assertEqual(len(prefix_documents(self.corpus, 1.0)), 5)
        with self.assertRaises(TrainingError):
            prefix_documents(self.corpus, 0.0)


def test_derive_seed_is_stable_and_distinct():
    assert derive_seed(1, 0) == derive_seed(1, 0)
    assert len({derive_seed(1, index) for index in range(10)}) == 10


@pytest.fixture(scope="module")
def setup(smoke_config, tiny_synthetic, tiny_vocab):
    config = TrainConfig.from_config(smoke_config, max_epochs=3, min_epochs=3, patience=3)
    texts = [list(document.surfaces) for document in tiny_synthetic.split("train").documents]
    sg_datasets = {mode: build_sg_dataset(texts, tiny_vocab, window=2, mode=mode) for mode in SgMode}
    data = prepare_rc_data(tiny_synthetic.split("train"), tiny_vocab, config)
    pretrained = pretrain_sg(sg_datasets[SgMode.SG], len(tiny_vocab), config.embed_dim, epochs=1, seed=11)
    return config, data, sg_datasets, pretrained


def _run(setup, vocab, **overrides):
    config, data, sg_datasets, pretrained = setup
    config = config.with_overrides(**overrides)
    return train(config, data, vocab, sg_datasets[config.setting.sg_mode], pretrained)


def test_zero_lambda_matches_pretrained_initialisation(setup, tiny_vocab):
    init_run = _run(setup, tiny_vocab, setting=TrainingSetting.RC_SG_INIT)
    joint_run = _run(setup, tiny_vocab, setting=TrainingSetting.RC_SG, lambda_sg=0.0)

    for name in init_run.model.parameter_names():
        np.testing.assert_array_equal(init_run.store.get(name).value, joint_run.store.get(name).value)
    for left, right in zip(init_run.history.records, joint_run.history.records):
        assert (left.loss_rc, left.val_F) == (right.loss_rc, right.val_F)


def test_fixed_setting_keeps_pretrained_table(setup, tiny_vocab):
    result = _run(setup, tiny_vocab, setting=TrainingSetting.RC_SG_FIXED)

    np.testing.assert_array_equal(result.store.get(TOKEN_TABLE).value, setup[3])
    assert result.store.get(TOKEN_TABLE).trainable is False


def test_training_is_deterministic(setup, tiny_vocab):
    first = _run(setup, tiny_vocab, setting=TrainingSetting.RC_SGLR, lambda_sg=0.5)
    second = _run(setup, tiny_vocab, setting=TrainingSetting.RC_SGLR, lambda_sg=0.5)

    assert first.history.as_rows() == second.history.as_rows()
    for parameter in first.store:
        np.testing.assert_array_equal(parameter.value, second.store.get(parameter.name).value)


def test_joint_step_draws_one_batch_of_each_task(setup, tiny_vocab):
    result = _run(setup, tiny_vocab, setting=TrainingSetting.RC_SG)
    history = result.history

    assert history.steps == history.rc_batches == history.sg_batches
    assert history.steps == 3 * len(epoch_batches(len(setup[1].train), setup[0].batch_size, np.random.default_rng(0)))


def test_random_setting_needs_no_pretrained_table(setup, tiny_vocab):
    config, data, _, _ = setup

    result = train(config.with_overrides(setting=TrainingSetting.RC_RANDOM), data, tiny_vocab)

    assert result.sg_model is None
    assert result.embedding_report is None
    assert result.history.epochs == 3


def test_inconsistent_settings_are_rejected(setup, tiny_vocab):
    config, data, sg_datasets, pretrained = setup
    with pytest.raises(TrainingError):
        train(config.with_overrides(setting=TrainingSetting.RC_SG_INIT), data, tiny_vocab)
    with pytest.raises(TrainingError):
        train(config.with_overrides(setting=TrainingSetting.RC_SG), data, tiny_vocab, None, pretrained)
    with pytest.raises(TrainingError):
        train(
            config.with_overrides(setting=TrainingSetting.RC_SGLR),
            data,
            tiny_vocab,
            sg_datasets[SgMode.SG],
            pretrained,
        )


def _metrics(f_measure):
    return Metrics(f_measure, f_measure, f_measure, 0, 0, 0, 0)


@pytest.mark.parametrize(
    "min_epochs, expected_epochs",
    [(2, 5), (7, 7)],
)
def test_early_stopping_restores_best_epoch(setup, tiny_vocab, min_epochs, expected_epochs):
    config, data, _, _ = setup
    scores = iter([0.2, 0.5, 0.4, 0.4, 0.4, 0.4, 0.4, 0.4, 0.4, 0.4])
    snapshots = []

    def fake_validation(model, examples, gold):
        snapshots.append(model.store.snapshot())
        return _metrics(next(scores))

    with mock.patch("tempcr.services.trainer.loop.validation_metrics", side_effect=fake_validation):
        result = train(
            config.with_overrides(
                setting=TrainingSetting.RC_RANDOM, patience=3, min_epochs=min_epochs, max_epochs=10
            ),
            data,
            tiny_vocab,
        )

    assert result.history.epochs == expected_epochs
    assert result.history.best_epoch == 2
    assert result.history.stopped_early
    for name, value in snapshots[1].items():
        np.testing.assert_array_equal(result.store.get(name).value, value)


def test_max_epochs_caps_training(setup, tiny_vocab):
    config, data, _, _ = setup
    scores = iter([0.1 * epoch for epoch in range(1, 10)])

    with mock.patch(
        "tempcr.services.trainer.loop.validation_metrics", side_effect=lambda *_: _metrics(next(scores))
    ):
        result = train(
            config.with_overrides(setting=TrainingSetting.RC_RANDOM, max_epochs=4, min_epochs=1),
            data,
            tiny_vocab,
        )

    assert result.history.epochs == 4
    assert result.history.best_epoch == 4
    assert not result.history.stopped_early


def test_checkpoint_reload_reproduces_predictions(setup, tiny_vocab, tiny_synthetic, tmp_path):
    config, data, _, pretrained = setup
    result = train(config.with_overrides(setting=TrainingSetting.RC_SG_INIT), data, tiny_vocab, None, pretrained)
    result_config = config.with_overrides(setting=TrainingSetting.RC_SG_INIT).as_dict()
    save_checkpoint(tmp_path / "ckpt", result.store, tiny_vocab, result_config)

    model, vocab, loaded_config = load_trained_model(tmp_path / "ckpt")

    assert loaded_config.setting is TrainingSetting.RC_SG_INIT
    assert loaded_config.as_dict() == result_config
    np.testing.assert_array_equal(
        predict_probabilities(model, data.validation), predict_probabilities(result.model, data.validation)
    )
    report, predicted = evaluate_model(model, vocab, tiny_synthetic.split("test"), loaded_config)
    assert set(report["subsets"]) == {"EE", "TE", "f0_100", "f100_500", "f500p"}
    assert report["documents"] == len(tiny_synthetic.split("test"))
    assert set(predicted.documents()) == {doc.id for doc in tiny_synthetic.split("test").documents}


class PretrainTestCase(unittest.TestCase):
    def setUp(self) -> None:
        self.vocab = Vocabulary(["x", "y", "a", "b", "c", "p", "q"])
        texts = [["x", "a", "y"], ["x", "b", "y"], ["p", "c", "q"]] * 30
        self.dataset = build_sg_dataset(texts, self.vocab, window=1)

    def test_same_seed_same_table(self) -> None:
        first = pretrain_sg(self.dataset, len(self.vocab), 4, epochs=2, seed=3, batch_size=16)
        second = pretrain_sg(self.dataset, len(self.vocab), 4, epochs=2, seed=3, batch_size=16)

        np.testing.assert_array_equal(first, second)

    def test_zero_epochs_returns_initialisation(self) -> None:
        table = pretrain_sg(self.dataset, len(self.vocab), 4, epochs=0, seed=5)

        init_stream = np.random.SeedSequence(5).spawn(2)[0]
        expected = uniform_init(np.random.default_rng(init_stream), (len(self.vocab), 4))
        np.testing.assert_array_equal(table, expected)

    def test_shared_contexts_give_similar_vectors(self) -> None:
        table = pretrain_sg(
            self.dataset, len(self.vocab), 8, epochs=60, seed=1, batch_size=16, learning_rate=0.05
        )

        def cosine(left: str, right: str) -> float:
            u = table[self.vocab.encode_token(left)]
            v = table[self.vocab.encode_token(right)]
            return float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))

        self.assertGreater(cosine("a", "b"), cosine("a", "c"))

    def test_empty_dataset(self) -> None:
        empty = build_sg_dataset([], self.vocab)
        with self.assertRaises(TrainingError):
            pretrain_sg(empty, len(self.vocab), 4, epochs=1, seed=0)


def _experiment(setup, vocab, corpus):
    _, _, sg_datasets, pretrained = setup
    return Experiment(
        train_corpus=corpus.split("train"),
        eval_corpus=corpus.split("dev"),
        vocab=vocab,
        sg_datasets=sg_datasets,
        pretrained=pretrained,
    )


def test_lambda_sweep_needs_joint_setting(setup, tiny_vocab, tiny_synthetic):
    with pytest.raises(TrainingError):
        sweep_lambda(
            _experiment(setup, tiny_vocab, tiny_synthetic),
            setup[0].with_overrides(setting=TrainingSetting.RC_SG_INIT),
        )


def test_lambda_sweep_emits_one_row_per_value(setup, tiny_vocab, tiny_synthetic):
    config = setup[0].with_overrides(max_epochs=1, min_epochs=1, setting=TrainingSetting.RC_SG)

    rows = sweep_lambda(_experiment(setup, tiny_vocab, tiny_synthetic), config, values=(0.1, 10.0))

    assert [row["x"] for row in rows] == [0.1, 10.0]
    assert all(row["sweep"] == "lambda" and 0.0 <= row["F"] <= 1.0 for row in rows)


def test_size_sweep_shares_seeds_across_settings(setup, tiny_vocab, tiny_synthetic):
    settings = (TrainingSetting.RC_RANDOM, TrainingSetting.RC_SG)
    with mock.patch("tempcr.services.trainer.sweeps.run_jobs", side_effect=lambda exp, jobs, workers: jobs) as run_jobs:
        jobs = sweep_train_size(
            _experiment(setup, tiny_vocab, tiny_synthetic), setup[0], fractions=(0.5, 1.0), settings=settings
        )

    run_jobs.assert_called_once()
    assert [job.index for job in jobs] == [0, 1, 2, 3]
    assert [job.config.setting for job in jobs] == [settings[0]] * 2 + [settings[1]] * 2
    assert jobs[0].config.seed == jobs[2].config.seed
    assert jobs[1].config.seed == jobs[3].config.seed
    assert jobs[0].config.seed != jobs[1].config.seed


def test_size_sweep_rejects_bad_fraction(setup, tiny_vocab, tiny_synthetic):
    with pytest.raises(TrainingError):
        sweep_train_size(_experiment(setup, tiny_vocab, tiny_synthetic), setup[0], fractions=(0.0,))


@slow
def test_sg_gradient_dominates_at_large_lambda(setup, tiny_vocab):
    config, data, sg_datasets, pretrained = setup

    ratio = measure_gradient_dominance(
        config.with_overrides(setting=TrainingSetting.RC_SG, lambda_sg=100.0),
        data,
        tiny_vocab,
        sg_datasets[SgMode.SG],
        pretrained,
        steps=100,
    )

    assert ratio >= 10.0


@slow
def test_separable_corpus_is_learned(smoke_config):
    generated = generate_synthetic(load_synth_spec(), seed=1)
    train_corpus = generated.split("train")
    vocab = build_vocab(train_corpus, generated.raw_texts, PreprocessConfig())
    config = TrainConfig.from_config(
        smoke_config, setting="rc-random", max_epochs=50, min_epochs=50, patience=50
    )

    result = train(config, prepare_rc_data(train_corpus, vocab, config), vocab)

    assert max(record.val_F for record in result.history.records) >= 0.9
