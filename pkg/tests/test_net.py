import numpy as np
import pytest

from hypothesis import given, strategies as st

import activepool as ap
from activepool.errors import ConfigError, ShapeError


def small_net(widths=(3, 5, 2), seed=0, dropout=0.0):
    return ap.init_classifier(ap.NetConfig(widths, dropout_rate=dropout, init_seed=seed))


class TestInit:
    def test_same_seed_bitwise_identical(self):
        a = small_net((2, 4, 2), seed=7)
        b = small_net((2, 4, 2), seed=7)
        for Wa, Wb in zip(a.weights, b.weights):
            assert np.array_equal(Wa, Wb)
        for ba, bb in zip(a.biases, b.biases):
            assert np.array_equal(ba, bb)

    def test_single_width_rejected(self):
        with pytest.raises(ConfigError):
            ap.NetConfig((2,))

    def test_shapes_follow_widths(self):
        clf = small_net((3, 5, 2))
        assert clf.weights[0].shape == (3, 5)
        assert clf.weights[1].shape == (5, 2)
        assert clf.biases[0].shape == (5,)
        assert clf.biases[1].shape == (2,)

    def test_biases_start_zero(self):
        clf = small_net((3, 5, 2))
        assert all(np.all(b == 0) for b in clf.biases)

    def test_dropout_rate_bounds(self):
        with pytest.raises(ConfigError):
            ap.NetConfig((2, 2), dropout_rate=1.0)


class TestForward:
    def test_zero_weights_zero_logits(self):
        clf = small_net((3, 5, 2))
        for W in clf.weights:
            W[:] = 0.0
        logits, _ = ap.forward(clf, np.random.default_rng(0).normal(size=(4, 3)))
        assert np.all(logits == 0.0)

    def test_dropout_rate_zero_is_identity(self):
        clf = small_net((3, 5, 2), seed=1)
        X = np.random.default_rng(1).normal(size=(6, 3))
        off, emb_off = ap.forward(clf, X, dropout_active=False)
        on, emb_on = ap.forward(clf, X, dropout_active=True, rng=0)
        assert np.array_equal(off, on)
        assert np.array_equal(emb_off, emb_on)

    def test_fixed_rng_replays(self):
        clf = small_net((3, 5, 2), seed=1, dropout=0.5)
        X = np.random.default_rng(2).normal(size=(6, 3))
        a, _ = ap.forward(clf, X, dropout_active=True, rng=42)
        b, _ = ap.forward(clf, X, dropout_active=True, rng=42)
        assert np.array_equal(a, b)

    def test_dimension_mismatch(self):
        clf = small_net((3, 5, 2))
        with pytest.raises(ShapeError):
            ap.forward(clf, np.zeros((4, 7)))


class TestPredictProb:
    def test_symmetric_logits(self):
        assert np.allclose(ap.softmax(np.array([[0.0, 0.0]])), [[0.5, 0.5]])

    def test_huge_logits_stay_finite(self):
        p = ap.softmax(np.array([[1000.0, 0.0]]))
        assert np.isfinite(p).all()
        assert p[0, 0] == pytest.approx(1.0)
        assert p[0, 1] == pytest.approx(0.0, abs=1e-300)

    def test_hand_computed_row(self):
        # independent exp-normalize of [1, 2, 3]
        p = ap.softmax(np.array([[1.0, 2.0, 3.0]]))
        assert np.allclose(p, [[0.09003057, 0.24472847, 0.66524096]], atol=1e-7)

    @given(
        st.lists(
            st.lists(st.floats(-1000, 1000), min_size=3, max_size=3),
            min_size=1,
            max_size=20,
        )
    )
    def test_rows_sum_to_one(self, rows):
        p = ap.softmax(np.array(rows))
        assert np.all(p >= 0)
        assert np.allclose(p.sum(axis=1), 1.0, atol=1e-9)


class TestPredict:
    def test_tie_breaks_low_index(self):
        clf = small_net((3, 5, 2))
        for W in clf.weights:
            W[:] = 0.0
        X = np.random.default_rng(0).normal(size=(5, 3))
        assert np.all(ap.predict(clf, X) == 0)

    def test_argmax_of_probs(self):
        clf = small_net((3, 5, 4), seed=3)
        X = np.random.default_rng(3).normal(size=(10, 3))
        assert np.array_equal(ap.predict(clf, X), np.argmax(ap.predict_prob(clf, X), axis=1))


class TestEmbeddings:
    def test_zero_net_zero_embeddings(self):
        clf = small_net((3, 5, 2))
        for W in clf.weights:
            W[:] = 0.0
        emb = ap.get_embeddings(clf, np.ones((4, 3)))
        assert np.all(emb == 0.0)

    def test_width_matches_penultimate(self):
        clf = small_net((3, 7, 4, 2), seed=5)
        emb = ap.get_embeddings(clf, np.random.default_rng(0).normal(size=(6, 3)))
        assert emb.shape == (6, 4)

    def test_identical_rows_identical_embeddings(self):
        clf = small_net((3, 5, 2), seed=4)
        X = np.tile(np.array([[0.5, -1.0, 2.0]]), (3, 1))
        emb = ap.get_embeddings(clf, X)
        assert np.array_equal(emb[0], emb[1])
        assert np.array_equal(emb[1], emb[2])


class TestMCDropout:
    def test_rate_zero_slices_equal_deterministic(self):
        clf = small_net((3, 5, 2), seed=2, dropout=0.0)
        X = np.random.default_rng(0).normal(size=(4, 3))
        stack = ap.mc_dropout_probs(clf, X, 3, rng=0)
        base = ap.predict_prob(clf, X)
        for t in range(3):
            assert np.array_equal(stack[t], base)

    def test_replay_identical(self):
        clf = small_net((3, 5, 2), seed=2, dropout=0.4)
        X = np.random.default_rng(0).normal(size=(4, 3))
        assert np.array_equal(
            ap.mc_dropout_probs(clf, X, 1, rng=9), ap.mc_dropout_probs(clf, X, 1, rng=9)
        )

    def test_mean_rows_sum_to_one(self):
        clf = small_net((3, 5, 2), seed=2, dropout=0.4)
        X = np.random.default_rng(0).normal(size=(8, 3))
        mean = ap.mc_dropout_probs(clf, X, 10, rng=1).mean(axis=0)
        assert np.allclose(mean.sum(axis=1), 1.0, atol=1e-9)

    def test_zero_passes_rejected(self):
        clf = small_net()
        with pytest.raises(ConfigError):
            ap.mc_dropout_probs(clf, np.zeros((1, 3)), 0)


class TestTrain:
    def test_separable_set_reaches_full_accuracy(self):
        X, Y = ap.make_two_gaussians(10, 4.0, 0.5, 1)
        clf = small_net((2, 8, 2), seed=1)
        clf2, _ = ap.train(clf, X, Y, ap.TrainParams(200, 8, 0.1, seed=1))
        assert ap.evaluate_accuracy(ap.predict(clf2, X), Y) == 1.0

    def test_zero_learning_rate_is_noop(self):
        X, Y = ap.make_two_gaussians(5, 3.0, 1.0, 0)
        clf = small_net((2, 4, 2), seed=0)
        clf2, hist = ap.train(clf, X, Y, ap.TrainParams(5, 4, 0.0, seed=0))
        for Wa, Wb in zip(clf.weights, clf2.weights):
            assert np.array_equal(Wa, Wb)
        assert max(hist) - min(hist) < 1e-12

    def test_xor_loss_decreases(self):
        # values frozen from the reference run of this exact configuration
        X = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
        Y = np.array([0, 1, 1, 0])
        clf = small_net((2, 8, 2), seed=0)
        _, hist = ap.train(clf, X, Y, ap.TrainParams(5, 4, 0.1, seed=0))
        expected = [0.6977172518, 0.6944442865, 0.6913207946, 0.6883222806, 0.6854285895]
        assert np.allclose(hist, expected, atol=1e-9)
        assert all(b < a for a, b in zip(hist, hist[1:]))

    def test_empty_labeled_set_rejected(self):
        clf = small_net((2, 4, 2))
        with pytest.raises(ConfigError):
            ap.train(clf, np.zeros((0, 2)), np.zeros(0, dtype=int), ap.TrainParams())

    def test_out_of_range_labels_rejected(self):
        clf = small_net((2, 4, 2))
        with pytest.raises(ConfigError):
            ap.train(clf, np.zeros((3, 2)), np.array([0, 1, 5]), ap.TrainParams())


class TestInputGradient:
    def test_linear_layer_gradient_is_weight_column(self):
        clf = small_net((3, 2), seed=0)
        g = ap.input_gradient(clf, np.array([0.3, -0.2, 1.0]), 1)
        assert np.allclose(g, clf.weights[0][:, 1])

    def test_matches_finite_differences(self):
        clf = small_net((3, 5, 2), seed=11)
        x = np.random.default_rng(11).normal(size=3)
        g = ap.input_gradient(clf, x, 1)
        h = 1e-5
        fd = np.empty(3)
        for i in range(3):
            xp, xm = x.copy(), x.copy()
            xp[i] += h
            xm[i] -= h
            lp, _ = ap.forward(clf, xp.reshape(1, -1))
            lm, _ = ap.forward(clf, xm.reshape(1, -1))
            fd[i] = (lp[0, 1] - lm[0, 1]) / (2 * h)
        assert np.linalg.norm(g - fd) / max(np.linalg.norm(fd), 1e-12) < 1e-4

    def test_zero_net_zero_gradient(self):
        clf = small_net((3, 5, 2))
        for W in clf.weights:
            W[:] = 0.0
        assert np.all(ap.input_gradient(clf, np.ones(3), 0) == 0.0)


class TestCheckpoint:
    def test_round_trip_bit_exact(self, tmp_path):
        clf = small_net((4, 6, 3), seed=13, dropout=0.25)
        path = tmp_path / "model.npz"
        ap.save_checkpoint(clf, path)
        loaded = ap.load_checkpoint(path)
        assert loaded.config == clf.config
        for Wa, Wb in zip(clf.weights, loaded.weights):
            assert np.array_equal(Wa, Wb)
        for ba, bb in zip(clf.biases, loaded.biases):
            assert np.array_equal(ba, bb)
