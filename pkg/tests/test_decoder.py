import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tncode.composition import CodeTensor, build_network
from tncode.contraction import Contractor, greedy_plan, tree_plan
from tncode.decoder import (
    MAX_JOINT,
    ZeroProbabilitySyndrome,
    chi,
    decode_joint,
    decode_marginal,
    decode_parallel,
    word_probability,
)
from tncode.noise import NoiseModel, depolarizing
from tncode.pauli import PauliString, parse
from tncode.stabilizer import Syndrome, chi_oracle, pure_error, steane, syndrome

import theorem_vectors as tv

CODE = steane()


def single():
    return build_network([CodeTensor(CODE)], [])


def value(c):
    return float(c.value())


def test_chi_noiseless(radius2):
    noise = depolarizing(0.0, radius2.n)
    zero = Syndrome(0, radius2.flat.m)
    assert value(chi(radius2, {q: 0 for q in range(8)}, zero, noise)) == 1.0
    assert value(chi(radius2, {q: (1 if q == 3 else 0) for q in range(8)}, zero, noise)) == 0.0


@pytest.mark.parametrize("p", [0.05, 0.1, 0.3])
def test_chi_equals_oracle_on_steane(p):
    net = single()
    noise = depolarizing(p, 7)
    for bits in range(64):
        s = Syndrome(bits, 6)
        for L in range(4):
            want = chi_oracle(CODE, (L,), s, noise)
            assert value(chi(net, {0: L}, s, noise)) == pytest.approx(want, rel=1e-12)


def _random_noise(n, rng):
    return NoiseModel(rng.dirichlet(np.ones(4), size=n))


def small_networks():
    st_ = CODE
    return {
        "12,2": build_network([CodeTensor(st_)] * 2, [((0, 0), (1, 0))]),
        "10,2": build_network([CodeTensor(st_)] * 2, [((0, 5), (1, 5)), ((0, 6), (1, 6))]),
        "chain": build_network([CodeTensor(st_)] * 3, [((0, 0), (1, 0)), ((1, 3), (2, 0))]),
        "loop": build_network([CodeTensor(st_)] * 3, [((0, 0), (1, 0)), ((1, 3), (2, 0)), ((0, 4), (2, 6))]),
    }


@pytest.mark.parametrize("name", ["12,2", "10,2", "chain", "loop"])
def test_chi_equals_oracle_on_small_networks(name):
    net = small_networks()[name]
    flat = net.flat
    assert flat.m <= 20
    rng = np.random.default_rng(7)
    noise = _random_noise(flat.n, rng)
    for bits in rng.integers(0, 2**flat.m, 6):
        s = Syndrome(int(bits), flat.m)
        for L in itertools.product(range(4), repeat=flat.k):
            want = chi_oracle(flat, L, s, noise)
            assert value(chi(net, dict(enumerate(L)), s, noise)) == pytest.approx(want, rel=1e-12)


def test_normalisation_on_steane():
    net = single()
    noise = depolarizing(0.17, 7)
    total = sum(value(chi(net, {0: L}, Syndrome(b, 6), noise)) for b in range(64) for L in range(4))
    assert total == pytest.approx(1.0, abs=1e-10)


def _chi_with_plan(net, plan, e, noise, assign):
    return Contractor(net, plan).contract(e, noise, assign)


def test_contraction_order_invariance(radius3):
    rng = np.random.default_rng(3)
    noise = depolarizing(0.08, radius3.n)
    err = PauliString.from_labels(rng.choice(4, radius3.n, p=[0.9, 0.1 / 3, 0.1 / 3, 0.1 / 3]))
    e = pure_error(radius3.flat, syndrome(radius3.flat, err)).labels()
    assign = {0: 1, 5: 3}
    base = _chi_with_plan(radius3, tree_plan(radius3), e, noise, assign)
    for plan in (tree_plan(radius3, reverse=True), tree_plan(radius3, rotate=3),
                 tree_plan(radius3, reverse=True, rotate=5)):
        other = _chi_with_plan(radius3, plan, e, noise, assign)
        assert other.log_scale + math.log(other.mantissa) == pytest.approx(
            base.log_scale + math.log(base.mantissa), abs=1e-12)


def test_greedy_plan_agrees(radius2):
    noise = depolarizing(0.1, radius2.n)
    e = parse("XZ" + "I" * 38 + "YI").labels()
    a = Contractor(radius2).contract(e, noise, open_qubits=[0, 4]).value()
    b = Contractor(radius2, greedy_plan(radius2)).contract(e, noise, open_qubits=[0, 4]).value()
    np.testing.assert_allclose(a, b, rtol=1e-12)


def test_joint_steane_single_x():
    net = single()
    s = syndrome(CODE, parse("IIXIIII"))
    out = decode_joint(net, [0], s, depolarizing(0.1, 7))
    assert out.word == (1,)
    chis = [chi_oracle(CODE, (L,), s, depolarizing(0.1, 7)) for L in range(4)]
    assert int(np.argmax(chis)) == 1
    np.testing.assert_allclose(out.conditional[0], np.array(chis) / sum(chis), rtol=1e-12)


def test_noiseless_decoding(radius2):
    zero = Syndrome(0, radius2.flat.m)
    noise = depolarizing(0.0, radius2.n)
    j = decode_joint(radius2, range(8), zero, noise)
    assert j.word == (0,) * 8 and j.word_probability == 1.0
    par = decode_parallel(radius2, range(8), zero, noise)
    assert par.word == (0,) * 8 and par.all_peaked
    m = decode_marginal(radius2, 0, zero, noise)
    assert m.word == (0,) and m.conditional[0, 0] == 1.0


def _random_syndromes(net, p, count, seed):
    rng = np.random.default_rng(seed)
    probs = [1 - p, p / 3, p / 3, p / 3]
    for _ in range(count):
        yield syndrome(net.flat, PauliString.from_labels(rng.choice(4, net.n, p=probs)))


def test_marginals_match_joint_table(radius2):
    noise = depolarizing(0.08, radius2.n)
    for s in _random_syndromes(radius2, 0.08, 5, 1):
        j = decode_joint(radius2, range(8), s, noise)
        assert j.joint.shape == (4,) * 8
        assert j.joint.sum() == pytest.approx(1.0, abs=1e-12)
        for q in range(8):
            m = decode_marginal(radius2, q, s, noise)
            np.testing.assert_allclose(m.conditional[0], j.conditional[q], atol=1e-10)
            assert m.conditional.sum() == pytest.approx(1.0, abs=1e-10)
        assert word_probability(radius2, dict(enumerate(j.word)), s, noise) == pytest.approx(
            j.word_probability, abs=1e-10)


def test_parallel_word_equals_joint_when_peaked(radius2):
    noise = depolarizing(0.05, radius2.n)
    peaked = 0
    for s in _random_syndromes(radius2, 0.05, 20, 2):
        par = decode_parallel(radius2, range(8), s, noise)
        assert par.threshold == pytest.approx(8 / 9)
        if par.all_peaked:
            peaked += 1
            assert par.word == decode_joint(radius2, range(8), s, noise).word
    assert peaked > 0


def test_marginals_on_twelve_qubit_code(net12):
    flat = net12.flat
    noise = depolarizing(0.1, 12)
    for s in _random_syndromes(net12, 0.1, 5, 4):
        table = np.array([[chi_oracle(flat, (a, b), s, noise) for b in range(4)] for a in range(4)])
        table /= table.sum()
        for q, want in ((0, table.sum(axis=1)), (1, table.sum(axis=0))):
            out = decode_marginal(net12, q, s, noise)
            assert out.conditional.sum() == pytest.approx(1.0, abs=1e-12)
            np.testing.assert_allclose(out.conditional[0], want, rtol=1e-12)
        words = [word_probability(net12, {0: a, 1: b}, s, noise) for a in range(4) for b in range(4)]
        assert sum(words) == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(words, table.ravel(), rtol=1e-12)


def test_word_probability_single_qubit(net12):
    noise = depolarizing(0.1, 12)
    s = next(_random_syndromes(net12, 0.1, 1, 9))
    out = decode_marginal(net12, 1, s, noise)
    for L in range(4):
        assert word_probability(net12, {1: L}, s, noise) == pytest.approx(out.conditional[0, L], rel=1e-12)


def test_tie_rule_and_degenerate_noise():
    net = single()
    # fully depolarized qubits: every class is equally likely, lowest index wins
    out = decode_marginal(net, 0, Syndrome(0, 6), depolarizing(0.75, 7))
    np.testing.assert_allclose(out.conditional[0], 0.25, rtol=1e-12)
    assert out.word == (0,) and out.ties == (True,)
    # p = 1: zero entries handled exactly
    out = decode_marginal(net, 0, syndrome(CODE, parse("XYZXYZX")), depolarizing(1.0, 7))
    assert out.conditional.sum() == pytest.approx(1.0)


def test_zero_probability_syndrome():
    with pytest.raises(ZeroProbabilitySyndrome):
        decode_marginal(single(), 0, Syndrome(1, 6), depolarizing(0.0, 7))


def test_errors(radius2):
    noise = depolarizing(0.1, radius2.n)
    zero = Syndrome(0, radius2.flat.m)
    with pytest.raises(IndexError):
        decode_marginal(radius2, 8, zero, noise)
    with pytest.raises(IndexError):
        chi(radius2, {9: 0}, zero, noise)
    with pytest.raises(ValueError):
        chi(radius2, {0: 0}, zero, depolarizing(0.1, 7))
    with pytest.raises(ValueError):
        decode_joint(radius2, [], zero, noise)
    with pytest.raises(ValueError):
        word_probability(radius2, {}, zero, noise)
    assert MAX_JOINT == 10


def test_large_code_does_not_underflow():
    from tncode.holographic import build_code

    net, _ = build_code(4)
    rng = np.random.default_rng(0)
    err = PauliString.from_labels(rng.choice(4, net.n, p=[0.7, 0.1, 0.1, 0.1]))
    s = syndrome(net.flat, err)
    out = decode_marginal(net, 0, s, depolarizing(0.3, net.n))
    assert math.isfinite(out.log_scale[0]) and out.log_scale[0] < -300
    assert out.conditional.sum() == pytest.approx(1.0, abs=1e-12)


def test_parallel_independent_of_workers(radius2):
    noise = depolarizing(0.1, radius2.n)
    s = next(_random_syndromes(radius2, 0.1, 1, 5))
    a = decode_parallel(radius2, range(8), s, noise, workers=1)
    b = decode_parallel(radius2, range(8), s, noise, workers=4)
    assert a.chi.tobytes() == b.chi.tobytes() and a.log_scale.tobytes() == b.log_scale.tobytes()


# marginal decoding theorem on abstract tables


@pytest.mark.parametrize("K", [2, 3])
def test_theorem_dense(K):
    rng = np.random.default_rng(K)
    checked = 0
    while checked < 20000:
        table = tv.peaked_dense(K, 5000, rng)
        marg = tv.dense_marginals(table, K)
        ok = (marg.max(axis=2) > K / (K + 1)).all(axis=1)
        prod = (marg.argmax(axis=2) * 4 ** np.arange(K - 1, -1, -1)).sum(axis=1)
        assert np.array_equal(table.argmax(axis=1)[ok], prod[ok])
        checked += int(ok.sum())


def test_theorem_sparse_k8():
    K = 8
    rng = np.random.default_rng(8)
    codes, weights = tv.peaked_sparse(K, 5000, rng)
    marg = tv.sparse_marginals(codes, weights, K)
    ok = (marg.max(axis=2) > K / (K + 1)).all(axis=1)
    assert ok.sum() > 500
    prod = (marg.argmax(axis=2) * 4 ** np.arange(K - 1, -1, -1)).sum(axis=1)
    assert np.array_equal(tv.sparse_joint_argmax(codes, weights, K)[ok], prod[ok])


@pytest.mark.parametrize("K", [2, 3, 8])
def test_tightness_family(K):
    eps = 1e-3
    table = tv.tightness_table(K, eps)
    assert table.sum() == pytest.approx(1.0)
    marg = tv.dense_marginals(table[None, :], K)[0]
    assert np.allclose(marg[:, 0], K / (K + 1) - eps / K)
    assert (marg.argmax(axis=1) == 0).all()
    assert int(table.argmax()) != 0
