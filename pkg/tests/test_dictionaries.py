import math

import numpy as np
import pytest

from ballcover.dictionaries import (
    Dictionary,
    coherence_banach,
    coherence_euclidean,
    coherence_matrix,
    greedy_maximal_dictionary,
)
from ballcover.frames import etf_from_hadamard
from ballcover.hadamard import sylvester
from ballcover.spaces import LpSpace, sample_sphere


def _dict2(vectors, p=2.0):
    vectors = np.asarray(vectors, dtype=float)
    return Dictionary(space=LpSpace(vectors.shape[1], p), vectors=vectors)


def test_dictionary_validation():
    with pytest.raises(ValueError):
        _dict2([[1.0, 1.0]])  # not unit norm
    with pytest.raises(ValueError):
        _dict2([[1.0, 0.0], [1.0, 0.0]])  # duplicate
    assert len(_dict2([[1.0, 0.0]])) == 1


def test_coherence_orthonormal():
    assert coherence_euclidean(_dict2(np.identity(3))) == 0.0


def test_coherence_known_pair():
    d = _dict2([[1.0, 0.0], [1.0 / math.sqrt(2), 1.0 / math.sqrt(2)]])
    assert coherence_euclidean(d) == pytest.approx(2.0 ** -0.5, rel=1e-14)


def test_coherence_etf_order4():
    d = etf_from_hadamard(sylvester(2)).as_dictionary()
    assert coherence_euclidean(d) == pytest.approx(1.0 / 3.0, rel=1e-12)


def test_coherence_errors():
    with pytest.raises(ValueError):
        coherence_euclidean(_dict2([[1.0, 0.0]]))
    with pytest.raises(ValueError):
        coherence_euclidean(_dict2(np.identity(2), p=4.0))
    with pytest.raises(ValueError):
        coherence_banach(
            Dictionary(space=LpSpace(2, math.inf), vectors=np.identity(2))
        )


def test_banach_equals_euclidean_at_p2():
    rng = np.random.default_rng(8)
    for _ in range(20):
        v = rng.standard_normal((5, 3))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        d = _dict2(v)
        assert coherence_banach(d) == pytest.approx(coherence_euclidean(d), abs=1e-12)


def test_banach_disjoint_supports():
    assert coherence_banach(_dict2(np.identity(2), p=4.0)) == 0.0


def test_banach_asymmetric_pair():
    # g1 = e1, g2 = (1,1)/2^(1/3) in l3: F_{g1}(g2) = 2^(-1/3),
    # F_{g2}(g1) = 2^(-2/3); coherence takes the larger direction
    g2 = np.array([1.0, 1.0]) / 2.0 ** (1.0 / 3.0)
    d = _dict2([[1.0, 0.0], g2], p=3.0)
    assert coherence_banach(d) == pytest.approx(2.0 ** (-1.0 / 3.0), rel=1e-12)


def test_sign_flip_invariance():
    rng = np.random.default_rng(9)
    v = rng.standard_normal((6, 4))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    base = coherence_euclidean(_dict2(v))
    flipped = v * rng.choice([-1.0, 1.0], size=(6, 1))
    assert coherence_euclidean(_dict2(flipped)) == pytest.approx(base, abs=1e-14)
    perm = v[rng.permutation(6)]
    assert coherence_euclidean(_dict2(perm)) == pytest.approx(base, abs=1e-14)


def test_coherence_matrix_identity():
    c = coherence_matrix(_dict2(np.identity(4)))
    np.testing.assert_allclose(c.entries, np.identity(4), atol=1e-14)
    assert c.numeric_rank() == 4


def test_coherence_matrix_etf():
    d = etf_from_hadamard(sylvester(2)).as_dictionary()
    c = coherence_matrix(d)
    assert np.max(np.abs(np.diag(c.entries) - 1.0)) <= 1e-12
    off = c.entries - np.diag(np.diag(c.entries))
    assert np.max(np.abs(off[off != 0] + 1.0 / 3.0)) <= 1e-12
    assert c.numeric_rank() == 3


def test_coherence_matrix_rank_bound():
    # numeric rank <= d for random overcomplete dictionaries, p != 2 included
    rng = np.random.default_rng(10)
    for trial in range(20):
        p = (2.0, 3.0, 4.0)[trial % 3]
        d = 3
        space = LpSpace(d, p)
        v = sample_sphere(space, 6, seed=100 + trial)
        mat = coherence_matrix(Dictionary(space=space, vectors=v))
        s = np.linalg.svd(mat.entries, compute_uv=False)
        assert s[d] <= 1e-9 * s[0]
        assert mat.numeric_rank() <= d


def test_coherence_matrix_bounded_by_coherence():
    space = LpSpace(3, 4.0)
    v = sample_sphere(space, 5, seed=11)
    d = Dictionary(space=space, vectors=v)
    c = coherence_matrix(d).entries
    off = c - np.diag(np.diag(c))
    assert np.max(np.abs(off)) <= coherence_banach(d) + 1e-12


def test_greedy_small_dimension():
    space = LpSpace(2, 2.0)
    d = greedy_maximal_dictionary(space, 0.1, seed=1)
    assert len(d) >= 2
    assert coherence_euclidean(d) <= 0.1
    assert d.trials_used is not None and d.trials_used >= len(d)


def test_greedy_one_dimensional():
    d = greedy_maximal_dictionary(LpSpace(1, 2.0), 0.5, seed=2)
    assert len(d) == 1
    assert abs(abs(d.vectors[0, 0]) - 1.0) <= 1e-12


def test_greedy_d8_size_and_coherence():
    space = LpSpace(8, 2.0)
    d = greedy_maximal_dictionary(space, 0.4, seed=3)
    m = coherence_euclidean(d)
    assert m <= 0.4
    assert len(d) >= 9  # mu >= 1/d admits at least a simplex frame
    fitted_c1 = math.log(len(d)) / (8 * 0.16 * math.log(5.0))
    assert fitted_c1 > 0.0
    assert len(d) <= math.exp(fitted_c1 * 8 * 0.16 * math.log(5.0)) + 1e-9


def test_greedy_banach():
    space = LpSpace(4, 4.0)
    d = greedy_maximal_dictionary(space, 0.5, seed=4)
    assert len(d) >= 2
    assert coherence_banach(d) <= 0.5


def test_greedy_validation():
    with pytest.raises(ValueError):
        greedy_maximal_dictionary(LpSpace(2, 2.0), 1.5, seed=0)
    with pytest.raises(ValueError):
        greedy_maximal_dictionary(LpSpace(2, math.inf), 0.5, seed=0)


def test_greedy_deterministic():
    space = LpSpace(3, 2.0)
    a = greedy_maximal_dictionary(space, 0.5, seed=7)
    b = greedy_maximal_dictionary(space, 0.5, seed=7)
    assert np.array_equal(a.vectors, b.vectors)
    assert a.trials_used == b.trials_used
