import numpy as np
import pytest

from wignerfluct.annular import AnnularPairing
from wignerfluct.states import (
    DetFamily,
    FiniteNState,
    SymbolicState,
    circulant,
    diagonal_pattern,
    eval_phi_K,
    eval_phi_tilde_K,
    family_from_json,
    identity,
    operator_norm_estimate,
    projection,
    random_fixed,
)
from wignerfluct.words import DetLetter, IDENTITY_LETTER, parse_word


def make_pairing(m, n, pairs):
    match = [0] * (m + n + 1)
    for a, b in pairs:
        match[a], match[b] = b, a
    return AnnularPairing(m, n, tuple(match))


def small_family():
    a = np.array([[1.0, 2.0, 0.0], [0.0, 1.0, 1.0], [3.0, 0.0, 1.0]])
    b = np.diag([1.0, -1.0, 2.0])
    return DetFamily([a, b])


def test_operator_norm_estimate_diagonal():
    m = np.diag([3.0, -1.0, 0.5])
    assert operator_norm_estimate(m) == pytest.approx(3.0, rel=1e-6)


def test_norm_bound_enforced():
    with pytest.raises(ValueError):
        DetFamily([np.diag([5.0, 0.0])], norm_bound=2.0)
    DetFamily([np.diag([5.0, 0.0])], norm_bound=5.0)


def test_letter_matrix_flags():
    fam = DetFamily([np.array([[1.0, 2j], [0.0, 1.0]])])
    base = fam.matrices[0]
    np.testing.assert_allclose(
        fam.letter_matrix(DetLetter.base(0, transpose=True)), base.T
    )
    np.testing.assert_allclose(
        fam.letter_matrix(DetLetter.base(0, star=True)), base.conj().T
    )
    fused = DetLetter.base(0).fuse(DetLetter.base(0, star=True))
    np.testing.assert_allclose(fam.letter_matrix(fused), base @ base.conj().T)


def test_letter_diag_detects_diagonal():
    fam = small_family()
    assert fam.letter_diag(DetLetter.base(0)) is None
    d = fam.letter_diag(DetLetter.base(1))
    np.testing.assert_allclose(d, [1.0, -1.0, 2.0])


def test_phi_basics():
    fam = small_family()
    state = FiniteNState(fam)
    assert state.phi([]) == 1.0
    assert state.phi([IDENTITY_LETTER]) == pytest.approx(1.0)
    assert state.phi([DetLetter.base(0)]) == pytest.approx(1.0)  # trace 3 over N=3


def test_phi_transpose_matches_matrices():
    fam = small_family()
    state = FiniteNState(fam)
    a, b = fam.matrices
    expected = np.trace(a @ b.T) / 3
    got = state.phi_transpose([DetLetter.base(0)], [DetLetter.base(1)])
    assert got == pytest.approx(expected)


def test_phi_hadamard_sees_diagonals_only():
    fam = small_family()
    state = FiniteNState(fam)
    a, b = fam.matrices
    expected = np.sum(np.diagonal(a) * np.diagonal(b)) / 3
    got = state.phi_hadamard([DetLetter.base(0)], [DetLetter.base(1)])
    assert got == pytest.approx(expected)


def test_eval_phi_K_factorizes():
    # the (2,2) pairing (1,3)(2,4) has Kreweras cycles (1,4)(2,3) wait:
    # check numerically against the explicit cycle product instead
    fam = small_family()
    state = FiniteNState(fam)
    p = make_pairing(2, 2, [(1, 3), (2, 4)])
    letters = [DetLetter.base(0), DetLetter.base(1)] * 2
    from wignerfluct.annular import kreweras

    k = kreweras(p)
    expected = 1.0 + 0.0j
    for cyc in k.cycles:
        expected *= state.phi([letters[i - 1] for i in cyc])
    assert eval_phi_K(p, letters, state) == pytest.approx(expected)


def test_eval_phi_tilde_requires_through():
    fam = small_family()
    state = FiniteNState(fam)
    p = make_pairing(4, 2, [(1, 5), (2, 3), (4, 6)])
    letters = [DetLetter.base(1)] * 6
    val = eval_phi_tilde_K(p, letters, state)
    assert np.isfinite(val.real)
    nested = make_pairing(2, 2, [(1, 3), (2, 4)])
    eval_phi_tilde_K(nested, [DetLetter.base(1)] * 4, state)
    with pytest.raises(ValueError):
        # pairing with four through strings is outside the tilde range
        q = make_pairing(4, 4, [(1, 5), (2, 6), (3, 7), (4, 8)])
        eval_phi_tilde_K(q, [DetLetter.base(1)] * 8, state)


def test_builders_shapes():
    assert np.array_equal(identity(3), np.eye(3))
    d = diagonal_pattern(5, [1, -1])
    np.testing.assert_allclose(np.diagonal(d), [1, -1, 1, -1, 1])
    c = circulant(4, [0, 1])
    np.testing.assert_allclose(c[0], [0, 1, 0, 0])
    np.testing.assert_allclose(c[3], [1, 0, 0, 0])
    p = projection(4, 0.5)
    assert np.trace(p).real == 2
    r = random_fixed(6, seed=3)
    assert r.shape == (6, 6)
    np.testing.assert_allclose(random_fixed(6, seed=3), r)


def test_family_from_json():
    doc = {
        "dim": 4,
        "matrices": [
            {"kind": "diagonal_pattern", "values": [1, -1]},
            {"kind": "circulant", "first_row": [0, 1]},
        ],
        "norm_bound": 2.0,
    }
    fam = family_from_json(doc)
    assert fam.N == 4
    assert len(fam.matrices) == 2
    with pytest.raises(ValueError):
        family_from_json({"dim": 2, "matrices": [{"kind": "nope"}]})


def test_symbolic_state_lookup():
    key = ((0, False, False),)
    state = SymbolicState({key: 0.5, key + key: 0.25})
    assert state.phi([DetLetter.base(0)]) == 0.5
    assert state.phi([DetLetter.base(0), DetLetter.base(0)]) == 0.25
    with pytest.raises(KeyError):
        state.phi([DetLetter.base(1)])


def test_symbolic_state_cyclic_invariance():
    ka = ((0, False, False), (1, False, False))
    state = SymbolicState({ka: 0.7})
    assert state.phi([DetLetter.base(1), DetLetter.base(0)]) == 0.7
