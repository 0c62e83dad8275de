import random
import warnings
from fractions import Fraction

import pytest

from qwalk.decoherence import (
    DecoherenceState,
    Event,
    psd_by_pivoted_cholesky,
)
from qwalk.errors import ResourceLimitError
from qwalk.exact import Dyadic, GaussianScaled
from qwalk.paths import PathSpace


from oracles import entry_sign_oracle


def state(n: int) -> DecoherenceState:
    return DecoherenceState(PathSpace(n))


def event(n: int, indices) -> Event:
    return Event.from_indices(PathSpace(n), indices)


# -- events -------------------------------------------------------------------


def test_event_construction():
    space = PathSpace(3)
    ev = Event.from_indices(space, [5, 1, 5])
    assert ev.to_tuple() == (1, 5)
    assert ev.cardinality == 2
    assert 5 in ev and 0 not in ev
    assert Event.full(space).cardinality == 8
    assert Event.empty(space).cardinality == 0
    with pytest.raises(ValueError):
        Event.from_indices(space, [8])
    with pytest.raises(ValueError):
        Event(space, 1 << 8)


def test_event_set_operations():
    a = event(3, [0, 1, 2])
    b = event(3, [2, 3])
    assert a.union(b).to_tuple() == (0, 1, 2, 3)
    assert a.intersection(b).to_tuple() == (2,)
    assert a.difference(b).to_tuple() == (0, 1)
    assert a.complement().to_tuple() == (3, 4, 5, 6, 7)
    assert not a.isdisjoint(b)
    assert a.difference(b).isdisjoint(b)
    with pytest.raises(ValueError):
        a.union(event(2, [0]))


def test_event_horizon_cap():
    with pytest.raises(ResourceLimitError):
        Event.empty(PathSpace(25))


# -- entries ------------------------------------------------------------------


PUBLISHED_N2 = [
    [1, 0, -1, 0],
    [0, 1, 0, 1],
    [-1, 0, 1, 0],
    [0, 1, 0, 1],
]


def test_entry_published_n2():
    st = state(2)
    for j in range(4):
        for k in range(4):
            got = st.entry(j, k)
            assert got == GaussianScaled(PUBLISHED_N2[j][k], 0, 2)


def test_entry_diagonal_and_hermitian():
    for n in (1, 2, 3, 5):
        st = state(n)
        size = 1 << n
        for j in range(size):
            assert st.entry(j, j) == GaussianScaled(1, 0, n)
        for j in range(min(size, 8)):
            for k in range(min(size, 8)):
                assert st.entry(j, k) == st.entry(k, j).conjugate()


@pytest.mark.parametrize("n", range(1, 9))
def test_entry_matches_string_oracle(n):
    st = state(n)
    size = 1 << n
    for j in range(size):
        for k in range(size):
            assert st.entry_sign(j, k) == entry_sign_oracle(n, j, k)


@pytest.mark.parametrize("n", (9, 10))
def test_entry_matches_string_oracle_large(n):
    # one string scan per path, then the exhaustive pair sweep runs in ints
    from oracles import changes_oracle

    st = state(n)
    size = 1 << n
    oracle_changes = [changes_oracle(n, j) for j in range(size)]
    for j in range(size):
        cj = oracle_changes[j]
        row_parity = j & 1
        for k in range(size):
            if (k & 1) != row_parity:
                want = 0
            else:
                want = 1 if (cj - oracle_changes[k]) % 4 == 0 else -1
            assert st.entry_sign(j, k) == want


def test_entry_out_of_range():
    st = state(3)
    with pytest.raises(ValueError):
        st.entry(0, 8)


def test_dense_signs_agree_with_oracle():
    for n in (1, 2, 3, 4, 5):
        st = state(n)
        size = 1 << n
        grid = st.dense_signs()
        for j in range(size):
            for k in range(size):
                assert grid[j * size + k] == entry_sign_oracle(n, j, k)
    with pytest.raises(ResourceLimitError):
        state(13).dense_signs()


# -- functional ---------------------------------------------------------------


def functional_oracle(n: int, a, b) -> Fraction:
    total = sum(entry_sign_oracle(n, j, k) for j in a for k in b)
    return Fraction(total, 1 << n)


@pytest.mark.parametrize("n", range(1, 7))
def test_functional_matches_oracle_random(n):
    rng = random.Random(1000 + n)
    st = state(n)
    size = 1 << n
    for _ in range(50):
        a = rng.sample(range(size), rng.randint(0, size))
        b = rng.sample(range(size), rng.randint(0, size))
        got = st.functional(event(n, a), event(n, b))
        assert got.imag.is_zero()
        assert got.real.as_fraction() == functional_oracle(n, a, b)
        by_entries = st.functional_by_entries(event(n, a), event(n, b))
        assert by_entries == got


def test_functional_published_values():
    st = state(2)
    full = Event.full(st.space)
    assert st.functional(full, full).real == Dyadic(1)
    assert st.functional(event(2, [0]), event(2, [2])).real == Dyadic(-1, 2)
    assert st.functional(Event.empty(st.space), full).is_zero()


def test_functional_space_mismatch():
    with pytest.raises(ValueError):
        state(3).functional(event(2, [0]), event(2, [1]))


def test_entry_total_is_one():
    for n in list(range(1, 21)) + [40, 63]:
        assert DecoherenceState(PathSpace(n)).entry_total() == Dyadic(1)


# -- rank-two factorization ------------------------------------------------


def test_eigenvector_published_n1():
    even, odd = state(1).eigenpair()
    assert even == [1, 0]
    assert odd == [0, 1j]


@pytest.mark.parametrize("n", range(1, 11))
def test_eigen_equation_exact(n):
    assert state(n).eigen_equation_holds()


def test_eigen_equation_cap():
    with pytest.raises(ResourceLimitError):
        state(11).eigen_equation_holds()


@pytest.mark.parametrize("n", range(1, 9))
def test_rank_two_reconstruction(n):
    st = state(n)
    even = st.eigenvector_exact(0)
    odd = st.eigenvector_exact(1)
    size = 1 << n
    for j in range(size):
        for k in range(size):
            re = sum(v[j][0] * v[k][0] + v[j][1] * v[k][1] for v in (even, odd))
            im = sum(v[j][1] * v[k][0] - v[j][0] * v[k][1] for v in (even, odd))
            assert im == 0
            assert re == entry_sign_oracle(n, j, k)


@pytest.mark.parametrize("n", (9, 10))
def test_rank_two_reconstruction_large(n):
    st = state(n)
    even = st.eigenvector_exact(0)
    odd = st.eigenvector_exact(1)
    merged = [e if (j & 1) == 0 else o for j, (e, o) in enumerate(zip(even, odd))]
    size = 1 << n
    for j in range(size):
        ar, ai = merged[j]
        parity = j & 1
        for k in range(size):
            br, bi = merged[k]
            if (k & 1) != parity:
                want = 0
            else:
                want = ar * br + ai * bi
                assert ai * br - ar * bi == 0
            assert st.entry_sign(j, k) == want


def test_eigenvector_unit_norm():
    for n in (1, 2, 3, 6):
        even, odd = state(n).eigenpair()
        for vec in (even, odd):
            assert sum(abs(z) ** 2 for z in vec) == pytest.approx(1.0)


def test_eigenvector_parity_support():
    st = state(4)
    even = st.eigenvector_exact(0)
    odd = st.eigenvector_exact(1)
    for j in range(16):
        if j % 2 == 0:
            assert even[j] != (0, 0) and odd[j] == (0, 0)
        else:
            assert even[j] == (0, 0) and odd[j] != (0, 0)


# -- vector measure -----------------------------------------------------------


def test_vector_measure_reproduces_functional():
    rng = random.Random(77)
    for n in range(1, 11):
        st = state(n)
        size = 1 << n
        for _ in range(200):
            a = Event(st.space, rng.getrandbits(size))
            b = Event(st.space, rng.getrandbits(size))
            assert st.vector_measure(a).inner(st.vector_measure(b)) == st.functional(a, b)


def test_vector_measure_additive():
    rng = random.Random(78)
    for n in (2, 4, 6):
        st = state(n)
        size = 1 << n
        for _ in range(100):
            m1 = rng.getrandbits(size)
            m2 = rng.getrandbits(size) & ~m1
            e1, e2 = Event(st.space, m1), Event(st.space, m2)
            assert st.vector_measure(e1) + st.vector_measure(e2) == st.vector_measure(
                e1.union(e2)
            )


def test_vector_measure_published():
    st = state(2)
    empty = st.vector_measure(Event.empty(st.space))
    assert (empty.even, empty.odd) == (0, 0)
    full = st.vector_measure(Event.full(st.space))
    assert full.inner(full).real == Dyadic(1)
    a, b = st.vector_measure(event(2, [0])), st.vector_measure(event(2, [2]))
    assert a.inner(b).real == Dyadic(-1, 2)
    pair = st.vector_measure(event(2, [1]))
    z0, z1 = pair.as_complex_pair()
    assert z0 == 0 and abs(z1) == pytest.approx(0.5)


def test_vector_measure_space_mismatch():
    with pytest.raises(ValueError):
        state(2).vector_measure(event(2, [0])).inner(
            state(3).vector_measure(event(3, [0]))
        )


# -- strong positivity ----------------------------------------------------------


def gram_psd_oracle(st: DecoherenceState, events) -> bool:
    """Exact PSD test for the functional Gram matrix.

    The matrix is Hermitian of rank at most two (it is a Gram matrix of
    two-component vectors), so it is PSD iff its trace and its second
    elementary symmetric function are both nonnegative; both are exact
    integers over a power of two here.
    """
    vecs = [st.census(ev) for ev in events]
    comps = [(c[0] - c[2], c[1] - c[3]) for c in vecs]
    g = [[x[0] * y[0] + x[1] * y[1] for y in comps] for x in comps]
    k = len(g)
    trace = sum(g[i][i] for i in range(k))
    e2 = sum(
        g[i][i] * g[j][j] - g[i][j] * g[j][i] for i in range(k) for j in range(i + 1, k)
    )
    return trace >= 0 and e2 >= 0


def test_strong_positivity_families():
    st3 = state(3)
    singles = [event(3, [j]) for j in range(8)]
    assert st3.strong_positivity_check(singles)
    assert gram_psd_oracle(st3, singles)
    st2 = state(2)
    family = [Event.empty(st2.space), Event.full(st2.space), event(2, [0, 2])]
    assert st2.strong_positivity_check(family)
    assert gram_psd_oracle(st2, family)


def test_strong_positivity_random_families():
    rng = random.Random(99)
    for n in (2, 3, 4, 5):
        st = state(n)
        size = 1 << n
        for _ in range(30):
            events = [
                Event(st.space, rng.getrandbits(size)) for _ in range(rng.randint(1, 8))
            ]
            assert st.strong_positivity_check(events)
            assert gram_psd_oracle(st, events)


def test_strong_positivity_cap():
    st = state(2)
    with pytest.raises(ResourceLimitError):
        st.strong_positivity_check([Event.full(st.space)] * 13)


def test_pivoted_cholesky_rejects_indefinite():
    assert not psd_by_pivoted_cholesky([[1.0, 2.0], [2.0, 1.0]])
    assert not psd_by_pivoted_cholesky([[0.0, 1.0], [1.0, 0.0]])
    assert not psd_by_pivoted_cholesky([[-1.0]])
    assert psd_by_pivoted_cholesky([[1.0, 0.5], [0.5, 1.0]])
    assert psd_by_pivoted_cholesky([[0.0, 0.0], [0.0, 0.0]])


def test_pivoted_cholesky_warns_near_zero():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert psd_by_pivoted_cholesky([[-1e-12]])
    assert any("tolerance" in str(w.message) for w in caught)
