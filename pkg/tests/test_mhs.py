import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import data_text
from quadgerm.exactalg import GaussianRational, I, Q, Subspace, mat_vec
from quadgerm.mhs import (
    FilteredComplex, FilteredVectorSpace, Filtration, FiltrationError, NotMixedHodge, check_mhs,
    dec_filtration, deligne_splitting, dump_filtered_complex, dump_filtered_space, gr_weight,
    hodge_numbers, is_pure, load_filtered_complex, load_filtered_space, random_filtered_complex,
    random_mhs, weight_support,
)


def e(n, k):
    return [Q(int(j == k)) for j in range(n)]


def test_filtration_step_conventions():
    W = Filtration(3, {1: [e(3, 0)], 3: [e(3, 0), e(3, 1), e(3, 2)]})
    assert W.at(0).dim == 0 and W.at(1).dim == 1 and W.at(2).dim == 1 and W.at(9).dim == 3
    F = Filtration(2, {0: [e(2, 0), e(2, 1)], 1: [e(2, 0)]}, increasing=False)
    assert F.at(-5).dim == 2 and F.at(1).dim == 1 and F.at(2).dim == 0
    with pytest.raises(FiltrationError):
        Filtration(2, {0: [e(2, 0)], 1: [e(2, 1)]})


def test_pure_fixture():
    V = load_filtered_space(data_text("mhs_pure.json"))
    assert not check_mhs(V)
    assert hodge_numbers(V) == {(1, 0): 1, (0, 1): 1}
    assert is_pure(V, 1) and not is_pure(V, 2)


def test_not_mhs_fixture():
    V = load_filtered_space(data_text("mhs_not_mhs.json"))
    bad = check_mhs(V)
    assert bad and bad[0]["weight"] is not None
    with pytest.raises(NotMixedHodge) as exc:
        deligne_splitting(V)
    assert exc.value.weight == bad[0]["weight"]


def test_real_hodge_line_is_not_pure_weight_one():
    # F^1 spanned by a real vector meets its conjugate
    V = FilteredVectorSpace.from_jumps(2, {1: [e(2, 0), e(2, 1)]}, {0: [e(2, 0), e(2, 1)], 1: [e(2, 0)]})
    assert any(b["weight"] == 1 and b["p"] == 1 for b in check_mhs(V))


def test_zero_space_is_pure_of_every_weight():
    V = FilteredVectorSpace.from_jumps(0, {}, {})
    assert all(is_pure(V, n) for n in range(-3, 4)) and gr_weight(V) == {}


def test_w_must_be_rational():
    with pytest.raises(FiltrationError):
        FilteredVectorSpace.from_jumps(2, {0: [[Q(1), I]], 1: [e(2, 0), e(2, 1)]})


def test_tate_type_splitting():
    # weight 2 line of type (1,1) inside weight 0 extension: V = Q^2
    V = FilteredVectorSpace.from_jumps(
        2, {0: [e(2, 0)], 2: [e(2, 0), e(2, 1)]},
        {0: [e(2, 0), e(2, 1)], 1: [[Q(1) / 2, Q(1)]]})
    assert not check_mhs(V)
    S = deligne_splitting(V)
    assert S.dims() == {(0, 0): 1, (1, 1): 1}
    assert not S.recombination_failures()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.booleans())
def test_random_mhs_properties(seed, split):
    V = random_mhs(random.Random(seed), split=split)
    assert not check_mhs(V)
    gr = gr_weight(V)
    assert sum(gr.values()) == V.dim
    assert is_pure(V, next(iter(gr))) == (len(gr) == 1)
    h = hodge_numbers(V)
    assert all(h[(p, q)] == h.get((q, p)) for p, q in h)
    assert all(sum(d for (p, q), d in h.items() if p + q == n) == g for n, g in gr.items())
    S = deligne_splitting(V)
    assert not S.recombination_failures()
    assert S.dims() == dict(sorted(h.items()))
    # conj I^{p,q} = I^{q,p} mod W_{p+q-2}
    for (p, q), piece in S.pieces.items():
        conj_piece = Subspace(V.dim, [[x.conjugate() if isinstance(x, GaussianRational) else x
                                       for x in v] for v in piece.basis])
        other = S.pieces.get((q, p), Subspace(V.dim)) + V.W.at(p + q - 2)
        assert other.contains_subspace(conj_piece)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_filtered_space_json_round_trip(seed):
    V = random_mhs(random.Random(seed))
    U = load_filtered_space(dump_filtered_space(V))
    assert U.W == V.W and U.F == V.F


# --- complexes -------------------------------------------------------------------------

def one_term(weights):
    n = len(weights)
    jumps = {w: [e(n, k) for k in range(n) if weights[k] <= w] for w in sorted(set(weights))}
    return FilteredComplex({1: n}, {}, {1: Filtration(n, jumps)})


def test_handmade_h1_supports():
    assert weight_support(one_term([1]), 1).weights == {1: 1}
    ws = weight_support(one_term([1, 2]), 1)
    assert ws.weights == {1: 1, 2: 1} and ws.conforms
    ws = weight_support(one_term([3]), 1)
    assert ws.weights == {3: 1} and not ws.conforms


def test_boundaries_removed_from_support():
    # A^0 = Q (weight 2) -> A^1 = Q^2 (weights 1, 2), hitting the weight-2 vector
    C = FilteredComplex({0: 1, 1: 2}, {0: [[Q(0)], [Q(1)]]},
                        {0: Filtration(1, {2: [e(1, 0)]}), 1: Filtration(2, {1: [e(2, 0)], 2: [e(2, 0), e(2, 1)]})})
    assert C.betti(1) == 1 and weight_support(C, 1).weights == {1: 1}


def test_complex_validation():
    with pytest.raises(FiltrationError):  # d^2 != 0
        FilteredComplex({0: 1, 1: 1, 2: 1}, {0: [[Q(1)]], 1: [[Q(1)]]}, {})
    with pytest.raises(FiltrationError):  # d raises weight
        FilteredComplex({0: 1, 1: 1}, {0: [[Q(1)]]},
                        {0: Filtration(1, {0: [e(1, 0)]}), 1: Filtration(1, {1: [e(1, 0)]})})


def _dec_brute(C, n, i, x):
    """x in W_(i-n) and dx in W_(i-n-1), straight from the definition."""
    if not C.W[n].at(i - n).contains(x):
        return False
    if not C.dims.get(n + 1):
        return True
    return C.W[n + 1].at(i - n - 1).contains(mat_vec(C.dmat(n), x))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_dec_matches_definition_on_grid(seed):
    C = random_filtered_complex(random.Random(seed), max_total=10)
    R = dec_filtration(C)
    assert R.identity_ok
    lo, hi = C.weight_bounds()
    for n in C.degrees:
        if C.dims[n] > 4:
            continue
        for i in range(lo + n - 1, hi + n + 2):
            S = R.complex.W[n].at(i)
            for x in product((-1, 0, 1), repeat=C.dims[n]):
                x = [Q(a) for a in x]
                assert S.contains(x) == _dec_brute(C, n, i, x)


def test_complex_fixture_and_round_trip():
    C = load_filtered_complex(data_text("complex_random.json"))
    assert dec_filtration(C).identity_ok
    D = load_filtered_complex(dump_filtered_complex(C))
    assert D.dims == C.dims and D.d == C.d and all(D.W[n] == C.W[n] for n in C.W)
    with pytest.raises(FiltrationError, match="line 1"):
        load_filtered_complex("{oops")
