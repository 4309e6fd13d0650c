import math
import tempfile
import unittest
from pathlib import Path

import numpy as np
import pytest

from tempcr.services.errors import ShapeError
from tempcr.services.neural import (
    AdamState,
    LSTMParams,
    Mode,
    ParameterStore,
    adam_step,
    cross_entropy,
    dropout,
    embed,
    embed_backward,
    grad_check,
    load_embeddings,
    lstm_backward,
    lstm_forward,
    max_relative_error,
    register_lstm,
    save_embeddings,
    softmax,
)
from tempcr.services.neural.layers import softmax_cross_entropy_backward


class EmbedTestCase(unittest.TestCase):
    def setUp(self) -> None:
        self.table = np.arange(12, dtype=np.float64).reshape(4, 3)

    def test_lookup_shape_and_rows(self) -> None:
        out = embed(np.array([[0, 3], [2, 2]]), self.table)

        self.assertEqual(out.shape, (2, 2, 3))
        np.testing.assert_array_equal(out[1, 0], self.table[2])

    def test_out_of_range_index(self) -> None:
        with self.assertRaises(ShapeError):
            embed(np.array([4]), self.table)
        with self.assertRaises(ShapeError):
            embed(np.array([-1]), self.table)

    def test_backward_sums_repeated_indices(self) -> None:
        grad = np.zeros_like(self.table)
        upstream = np.ones((3, 3))

        embed_backward(np.array([1, 1, 3]), upstream, grad)

        np.testing.assert_array_equal(grad[1], [2.0, 2.0, 2.0])
        np.testing.assert_array_equal(grad[3], [1.0, 1.0, 1.0])
        np.testing.assert_array_equal(grad[0], [0.0, 0.0, 0.0])

    def test_backward_is_linear_in_upstream(self) -> None:
        rng = np.random.default_rng(0)
        indices = rng.integers(0, 4, size=(2, 5))
        first = rng.normal(size=(2, 5, 3))
        second = rng.normal(size=(2, 5, 3))

        combined = embed_backward(indices, 2.0 * first + second, np.zeros_like(self.table))
        separate = 2.0 * embed_backward(indices, first, np.zeros_like(self.table)) + embed_backward(
            indices, second, np.zeros_like(self.table)
        )

        np.testing.assert_allclose(combined, separate, atol=1e-12)


class SoftmaxCrossEntropyTestCase(unittest.TestCase):
    def test_softmax_is_a_distribution(self) -> None:
        probs = softmax(np.array([[1.0, 2.0, 3.0], [1000.0, 1000.0, -1000.0]]))

        np.testing.assert_allclose(probs.sum(axis=1), [1.0, 1.0])
        np.testing.assert_allclose(probs[1], [0.5, 0.5, 0.0], atol=1e-12)
        self.assertTrue(np.all(np.isfinite(probs)))

    def test_softmax_stays_positive_below_underflow_gap(self) -> None:
        probs = softmax(np.array([700.0, 0.0, -5.0]))

        self.assertTrue(np.all(probs > 0.0))
        self.assertEqual(float(softmax(np.array([800.0, 0.0]))[1]), 0.0)

    def test_softmax_is_shift_invariant(self) -> None:
        logits = np.array([0.3, -1.2, 2.0])

        np.testing.assert_allclose(softmax(logits), softmax(logits + 50.0))

    def test_cross_entropy_values(self) -> None:
        self.assertAlmostEqual(cross_entropy(np.array([0.25, 0.75]), 1), -math.log(0.75))
        self.assertAlmostEqual(cross_entropy(np.array([1.0, 0.0]), 1), -math.log(1e-12))

        losses = cross_entropy(np.array([[0.5, 0.5], [0.9, 0.1]]), np.array([0, 0]))
        np.testing.assert_allclose(losses, [math.log(2.0), -math.log(0.9)])

    def test_cross_entropy_rejects_bad_gold(self) -> None:
        with self.assertRaises(ShapeError):
            cross_entropy(np.array([0.5, 0.5]), 2)

    def test_logit_gradient_is_probs_minus_onehot(self) -> None:
        probs = np.array([[0.2, 0.8], [0.6, 0.4]])

        grad = softmax_cross_entropy_backward(probs, np.array([1, 0]))

        np.testing.assert_allclose(grad, [[0.2, -0.2], [-0.4, 0.4]])


class DropoutTestCase(unittest.TestCase):
    def test_inference_and_zero_rate_are_identity(self) -> None:
        x = np.ones((4, 4))

        self.assertIs(dropout(x, 0.5, Mode.INFER), x)
        self.assertIs(dropout(x, 0.0, Mode.TRAIN), x)

    def test_survivors_are_rescaled(self) -> None:
        out = dropout(np.ones(100_000), 0.5, Mode.TRAIN, np.random.default_rng(1))

        self.assertTrue(set(np.unique(out).tolist()) <= {0.0, 2.0})
        self.assertAlmostEqual(float((out != 0).mean()), 0.5, delta=0.01)
        self.assertAlmostEqual(float(out.mean()), 1.0, delta=0.02)

    def test_invalid_rate(self) -> None:
        with self.assertRaises(ValueError):
            dropout(np.ones(3), 1.0)


def _lstm_store(input_size=3, hidden=4, seed=0):
    store = ParameterStore()
    register_lstm(store, input_size, hidden, np.random.default_rng(seed))
    return store


class LSTMTestCase(unittest.TestCase):
    def test_single_step_by_hand(self) -> None:
        params = LSTMParams(
            Wx=np.array([[0.0, 0.0, 0.0, 1.0]]),
            Wh=np.zeros((1, 4)),
            b=np.zeros(4),
        )

        h, _ = lstm_forward(np.array([[1.0]]), params)

        c = 0.5 * math.tanh(1.0)
        self.assertAlmostEqual(float(h[0]), 0.5 * math.tanh(c))

    def test_forget_bias_initialisation(self) -> None:
        store = _lstm_store(hidden=2)

        np.testing.assert_array_equal(store.get("lstm_b").value, [0, 0, 1, 1, 0, 0, 0, 0])

    def test_padding_does_not_change_last_state(self) -> None:
        store = _lstm_store()
        params = LSTMParams.from_store(store)
        rng = np.random.default_rng(3)
        short = rng.normal(size=(2, 3))
        padded = np.zeros((2, 5, 3))
        padded[0, :2] = short
        padded[1] = rng.normal(size=(5, 3))
        padded[0, 2:] = rng.normal(size=(3, 3))

        batched, _ = lstm_forward(padded, params, np.array([2, 5]))
        alone, _ = lstm_forward(short, params)

        np.testing.assert_allclose(batched[0], alone, atol=1e-12)

    def test_rejects_bad_lengths(self) -> None:
        params = LSTMParams.from_store(_lstm_store())
        with self.assertRaises(ShapeError):
            lstm_forward(np.zeros((2, 3, 3)), params, np.array([0, 3]))
        with self.assertRaises(ShapeError):
            lstm_forward(np.zeros((2, 3, 4)), params)

    def test_backward_matches_finite_differences(self) -> None:
        store = _lstm_store(seed=5)
        rng = np.random.default_rng(7)
        inputs = rng.normal(size=(3, 4, 3))
        lengths = np.array([4, 2, 1])
        weights = rng.normal(size=(3, 4))

        def loss() -> float:
            params = LSTMParams.from_store(store)
            h, cache = lstm_forward(inputs, params, lengths)
            grads = lstm_backward(cache, weights)
            store.get("lstm_Wx").accumulate(grads.dWx)
            store.get("lstm_Wh").accumulate(grads.dWh)
            store.get("lstm_b").accumulate(grads.db)
            return float(np.sum(h * weights))

        report = grad_check(loss, store)

        self.assertLess(max_relative_error(report), 1e-4)

    def test_input_gradient_is_zero_on_padding(self) -> None:
        params = LSTMParams.from_store(_lstm_store())
        _, cache = lstm_forward(np.ones((1, 4, 3)), params, np.array([2]))

        grads = lstm_backward(cache, np.ones((1, 4)))

        np.testing.assert_array_equal(grads.dx[0, 2:], np.zeros((2, 3)))
        self.assertTrue(np.any(grads.dx[0, :2] != 0.0))


class AdamTestCase(unittest.TestCase):
    def test_first_step_moves_by_learning_rate(self) -> None:
        store = ParameterStore()
        parameter = store.register("w", np.array([1.0, -2.0, 0.5]))
        parameter.grad[...] = [3.0, -0.1, 0.0]

        adam_step(store, AdamState(lr=0.01))

        # m_hat = g and v_hat = g^2 on the first step
        expected = np.array([1.0 - 0.01 * 3.0 / (3.0 + 1e-8), -2.0 + 0.01 * 0.1 / (0.1 + 1e-8), 0.5])
        np.testing.assert_allclose(parameter.value, expected, rtol=1e-12)
        np.testing.assert_array_equal(parameter.grad, np.zeros(3))

    def test_zero_gradient_is_identity(self) -> None:
        store = ParameterStore()
        parameter = store.register("w", np.array([0.3, 0.7]))
        state = AdamState()

        for _ in range(3):
            adam_step(store, state)

        np.testing.assert_array_equal(parameter.value, [0.3, 0.7])
        self.assertEqual(state.t, 3)

    def test_frozen_parameters_are_skipped(self) -> None:
        store = ParameterStore()
        frozen = store.register("frozen", np.array([1.0]), trainable=False)
        frozen.grad[...] = 5.0
        state = AdamState()

        adam_step(store, state)

        np.testing.assert_array_equal(frozen.value, [1.0])
        self.assertNotIn("frozen", state.m)
        np.testing.assert_array_equal(frozen.grad, [0.0])


class ParameterStoreTestCase(unittest.TestCase):
    def test_duplicate_registration_fails(self) -> None:
        store = ParameterStore()
        store.register("w", np.zeros(2))
        with self.assertRaises(ShapeError):
            store.register("w", np.zeros(2))

    def test_snapshot_and_restore(self) -> None:
        store = ParameterStore()
        parameter = store.register("w", np.array([1.0, 2.0]))
        saved = store.snapshot()
        parameter.value += 1.0

        store.restore(saved)

        np.testing.assert_array_equal(parameter.value, [1.0, 2.0])

    def test_accumulate_checks_shape(self) -> None:
        parameter = ParameterStore().register("w", np.zeros(2))
        with self.assertRaises(ShapeError):
            parameter.accumulate(np.zeros(3))

    def test_float32_store(self) -> None:
        parameter = ParameterStore(dtype="float32").register("w", np.zeros(2))
        self.assertEqual(parameter.value.dtype, np.float32)


def test_grad_check_on_quadratic():
    store = ParameterStore()
    parameter = store.register("w", np.array([0.5, -1.5, 2.0]))

    def loss():
        parameter.accumulate(2.0 * parameter.value)
        return float(np.sum(parameter.value**2))

    assert max_relative_error(grad_check(loss, store)) < 1e-8
    np.testing.assert_array_equal(parameter.grad, np.zeros(3))


def test_grad_check_detects_wrong_gradient():
    store = ParameterStore()
    parameter = store.register("w", np.array([1.0, 2.0]))

    def loss():
        parameter.accumulate(parameter.value)
        return float(np.sum(parameter.value**2))

    assert max_relative_error(grad_check(loss, store)) > 0.1


@pytest.mark.parametrize("token", ["plain", "with space", "line\nbreak", "back\\slash"])
def test_embeddings_file_keeps_tokens_and_values(token):
    tokens = ["<unk>", token, "third"]
    matrix = np.random.default_rng(2).normal(size=(3, 4))
    with tempfile.TemporaryDirectory() as tmp:
        path = save_embeddings(Path(tmp) / "emb.txt", tokens, matrix)
        header = path.read_text(encoding="utf-8").splitlines()[0]
        loaded_tokens, loaded = load_embeddings(path)

    assert header == "3 4"
    assert loaded_tokens == tokens
    np.testing.assert_array_equal(loaded, matrix)


def test_embeddings_header_mismatch():
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "emb.txt"
        path.write_text("2 2\na 0.1 0.2\n", encoding="utf-8")
        with pytest.raises(ShapeError):
            load_embeddings(path)
