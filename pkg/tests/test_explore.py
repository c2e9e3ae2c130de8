import numpy as np
import pytest

from hyperx.explore import (BonusSchedule, HyperStateBuffer, RndPair,
                            combine_rewards, rnd_update)


def rnd_cfg(**over):
    cfg = {
        "layers_rpf_prior": [32, 32],
        "layers_rpf_predictor": [32, 32],
        "rpf_output_dim": 16,
        "rpf_use_orthogonal_init": False,
        "rpf_norm_inputs": False,
        "rpf_init_weight_scale": 10.0,
        "lr_rpf": 1e-4,
    }
    cfg.update(over)
    return cfg


def test_bonus_zero_when_predictor_copies_prior():
    rng = np.random.default_rng(0)
    pair = RndPair(4, rnd_cfg(), rng)
    for pp, fp in zip(pair.prior_store, pair.store):
        fp.data[...] = pp.data
    x = np.random.default_rng(1).standard_normal((50, 4))
    np.testing.assert_array_equal(pair.bonus(x), np.zeros(50))


def test_bonus_positive_iff_outputs_differ():
    rng = np.random.default_rng(2)
    pair = RndPair(4, rnd_cfg(), rng)
    x = np.random.default_rng(3).standard_normal((100, 4))
    b = pair.bonus(x)
    assert (b >= 0).all() and (b > 0).all()  # fresh predictor disagrees everywhere


def test_bonus_matches_hand_arithmetic_one_layer():
    rng = np.random.default_rng(4)
    cfg = rnd_cfg(layers_rpf_prior=[], layers_rpf_predictor=[], rpf_output_dim=3)
    pair = RndPair(2, cfg, rng)
    x = np.array([[0.7, -0.3]])
    g = x @ pair.prior_store["rnd/prior0/0/w"].data + pair.prior_store["rnd/prior0/0/b"].data
    f = x @ pair.store["rnd/pred0/0/w"].data + pair.store["rnd/pred0/0/b"].data
    assert pair.bonus(x)[0] == pytest.approx(float(np.square(f - g).sum()), rel=1e-12)


def test_ensemble_b1_reduces_to_plain_squared_error():
    rng = np.random.default_rng(5)
    pair1 = RndPair(3, rnd_cfg(), np.random.default_rng(7), ensemble_size=1, beta=123.0)
    x = rng.standard_normal((40, 3))
    b = pair1.bonus(x)
    direct = np.square(
        pair1.predictors[0](x, params=False) - pair1.priors[0](x, params=False)).sum(axis=1)
    np.testing.assert_array_equal(b, direct)


def test_ensemble_variance_term_and_floor():
    rng = np.random.default_rng(6)
    pair = RndPair(3, rnd_cfg(), rng, ensemble_size=3, beta=1.0)
    x = rng.standard_normal((10, 3))
    errs = np.stack([
        np.square(f(x, params=False) - g(x, params=False)).sum(axis=1)
        for f, g in zip(pair.predictors, pair.priors)])
    expected = np.maximum(0.0, errs.mean(axis=0) + errs.var(axis=0, ddof=1))
    np.testing.assert_allclose(pair.bonus(x), expected, rtol=1e-12)
    assert (pair.bonus(x) >= 0).all()


def test_prior_frozen_under_updates():
    rng = np.random.default_rng(7)
    pair = RndPair(3, rnd_cfg(), rng)
    buf = HyperStateBuffer(100, 3)
    buf.add(rng.standard_normal((50, 3)))
    before = {p.path: p.data.copy() for p in pair.prior_store}
    probe = rng.standard_normal((5, 3))
    out_before = pair.priors[0](probe, params=False)
    for _ in range(20):
        rnd_update(pair, buf, rng, 32)
    for p in pair.prior_store:
        np.testing.assert_array_equal(p.data, before[p.path])
    np.testing.assert_array_equal(pair.priors[0](probe, params=False), out_before)


def test_update_loss_nonnegative_and_skips_empty():
    rng = np.random.default_rng(8)
    pair = RndPair(3, rnd_cfg(), rng)
    assert rnd_update(pair, HyperStateBuffer(10, 3), rng, 8) is None
    buf = HyperStateBuffer(10, 3)
    buf.add(rng.standard_normal((6, 3)))
    assert rnd_update(pair, buf, rng, 8) >= 0.0


def test_distillation_drives_fixed_point_bonus_down():
    """2000 steps at lr 1e-4 on one repeated hyper-state drive its bonus
    below 1e-4, while far-away points stay comparatively novel."""
    rng = np.random.default_rng(9)
    pair = RndPair(3, rnd_cfg(rpf_init_weight_scale=1.0), rng, ensemble_size=1)
    point = np.array([[0.5, -0.2, 0.1]])
    batch = np.repeat(point, 32, axis=0)
    for _ in range(2000):
        pair.update(batch)
    trained = pair.bonus(point)[0]
    assert trained < 1e-4
    far = rng.standard_normal((100, 3)) * 3.0 + 5.0
    assert np.median(pair.bonus(far)) > 100 * trained


def test_hyperstate_buffer_ring():
    buf = HyperStateBuffer(4, 2)
    buf.add(np.arange(12.0).reshape(6, 2))
    assert len(buf) == 4
    np.testing.assert_array_equal(sorted(buf.data[:, 0].tolist()), [4.0, 6.0, 8.0, 10.0])


# ---------------------------------------------------------------------------
# schedule / combined rewards


def test_weights_anneal_linearly_to_zero():
    s = BonusSchedule(2.0, 0.5, frame_budget=1000, anneal=True)
    assert s.weights(0) == (2.0, 0.5)
    lh, le = s.weights(500)
    assert lh == pytest.approx(1.0) and le == pytest.approx(0.25)
    assert s.weights(1000) == (0.0, 0.0)
    assert s.weights(2000) == (0.0, 0.0)
    prev = np.inf
    for f in range(0, 1100, 100):
        lh, _ = s.weights(f)
        assert lh <= prev
        prev = lh


def test_zero_weights_reproduce_plain_normalized_extrinsic():
    s = BonusSchedule(0.0, 0.0, frame_budget=100, anneal=True)
    r = np.array([3.0, -1.0])
    s.update_stats(r, np.zeros(2), np.zeros(2))
    out = combine_rewards(r, np.full(2, 99.0), np.full(2, 99.0), s, frames=10)
    np.testing.assert_array_equal(out, r / s.ext_norm.std)


def test_annealing_endpoint_contributes_exactly_zero():
    s = BonusSchedule(5.0, 5.0, frame_budget=100, anneal=True)
    r = np.array([1.0])
    for _ in range(10):
        s.update_stats(r, np.array([7.0]), np.array([3.0]))
    at_end = combine_rewards(r, np.array([7.0]), np.array([3.0]), s, frames=100)
    np.testing.assert_array_equal(at_end, r / s.ext_norm.std)


def test_separate_normalization_is_scale_independent():
    """Scaling the extrinsic stream must leave normalized intrinsic terms
    bit-identical."""
    outs = []
    for k in (1.0, 1000.0):
        s = BonusSchedule(1.0, 1.0, frame_budget=10**6, anneal=False,
                          normalize_extrinsic=True)
        rng = np.random.default_rng(10)
        for _ in range(50):
            ext = rng.standard_normal(4) * k
            rh = rng.standard_normal(4) ** 2
            re = rng.standard_normal(4) ** 2
            s.update_stats(ext, rh, re)
        rh = np.array([0.5, 2.0, 1.0, 3.0])
        re = np.array([1.5, 0.1, 0.7, 0.9])
        outs.append((s._norm_intr(rh, s.hyper_norm), s._norm_intr(re, s.error_norm)))
    np.testing.assert_array_equal(outs[0][0], outs[1][0])
    np.testing.assert_array_equal(outs[0][1], outs[1][1])


def test_degenerate_variance_guarded():
    s = BonusSchedule(1.0, 1.0, frame_budget=100, anneal=False)
    for _ in range(20000):
        s.update_stats(np.zeros(2), np.zeros(2), np.zeros(2))
    out = combine_rewards(np.zeros(2), np.zeros(2), np.zeros(2), s, frames=0)
    assert np.isfinite(out).all()


def test_intrinsic_clipping_applied_after_normalization():
    s = BonusSchedule(1.0, 0.0, frame_budget=100, anneal=False, clip_intrinsic=2.0)
    s.update_stats(np.array([1.0]), np.array([1.0]), np.array([0.0]))
    out = s._norm_intr(np.array([1e9]), s.hyper_norm)
    assert out[0] == 2.0
