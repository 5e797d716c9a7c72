import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import data_text, load_group
from quadgerm.exactalg import ArtinAlgebra, Q, identity
from quadgerm.grouprep import (
    LinearGroupData, ParseError, Presentation, Representation, ad_action, check_representation,
    evaluate_word, fox_derivative, free_reduce, group_ring_mul, parse_presentation,
    parse_representation, representation_to_text, word_inverse,
)

letters = st.lists(st.tuples(st.integers(0, 2), st.sampled_from([1, -1])), max_size=10)


@settings(max_examples=80, deadline=None)
@given(letters)
def test_fox_fundamental_formula(word):
    # w - 1 = sum_g (dw/dg)(g - 1) in the integral group ring
    w = free_reduce(word)
    lhs = {w: 1}
    lhs[()] = lhs.get((), 0) - 1
    lhs = {k: v for k, v in lhs.items() if v}
    rhs: dict = {}
    for g in range(3):
        term = group_ring_mul(fox_derivative(w, g), {((g, 1),): 1, (): -1})
        for k, v in term.items():
            rhs[k] = rhs.get(k, 0) + v
    assert lhs == {k: v for k, v in rhs.items() if v}


@settings(max_examples=50, deadline=None)
@given(letters)
def test_free_reduce_and_inverse(word):
    w = free_reduce(word)
    assert free_reduce(w) == w
    assert free_reduce(w + word_inverse(w)) == ()


def test_presentation_parsing_errors():
    with pytest.raises(ParseError) as e:
        parse_presentation("gens a b\nrel a c\n")
    assert e.value.line == 2 and e.value.column == 7
    with pytest.raises(ParseError):
        parse_presentation("rel a\n")
    with pytest.raises(ParseError):
        parse_presentation("gens a a\n")
    with pytest.raises(ParseError):
        parse_presentation("gens a\nrel a^0\n")
    P = parse_presentation(data_text("heisenberg.pres"))
    assert P.generators == ("a", "b", "c") and len(P.relators) == 3


def test_builtin_lie_algebras():
    for name, dim in [("sl2", 3), ("sl3", 8), ("gl2", 4), ("gl3", 9)]:
        g = LinearGroupData.named(name)
        assert g.dim == dim and g.jacobi_holds()
    with pytest.raises(ValueError):
        LinearGroupData.named("so3")
    with pytest.raises(ValueError):
        LinearGroupData(2, [[[0, 1], [0, 0]], [[0, 0], [1, 0]]])  # not bracket-closed


def test_sl2_structure_constants():
    g = LinearGroupData.sl(2)
    e, f, h = ([Q(int(i == k)) for i in range(3)] for k in range(3))
    assert g.bracket_coords(e, f) == h
    assert g.bracket_coords(h, e) == [2, 0, 0]
    assert g.bracket_coords(h, f) == [0, -2, 0]


def test_representation_checks():
    pres, rep = load_group("z2.pres", "z2_bad.rep")
    rep_report = check_representation(rep)
    assert not rep_report.relators_ok and not rep_report.valid
    assert rep_report.failed_relators == ["a b a^-1 b^-1"]
    pres, rep = load_group("z2_order2.pres", "z2_order2_sign_gl2.rep")
    r = check_representation(rep)
    assert r.valid and r.image_order == 2
    pres, rep = load_group("genus2.pres", "genus2_trivial_sl2.rep")
    assert check_representation(rep).image_order == 1


def test_representation_parse_errors():
    pres = parse_presentation(data_text("z2.pres"))
    with pytest.raises(ParseError):
        parse_representation("dim 2\nliealg sl2\ngen a = identity\n", pres)
    with pytest.raises(ParseError):
        parse_representation("dim 2\nliealg sl2\ngen a = [[1,1],[1,1]]\ngen b = identity\n", pres)
    with pytest.raises(ParseError):
        parse_representation("dim 3\nliealg sl2\ngen a = identity\ngen b = identity\n", pres)


def test_representation_text_round_trip():
    pres, rep = load_group("z2_order2.pres", "z2_order2_sign_gl2.rep")
    again = parse_representation(representation_to_text(rep), pres)
    assert again.images == rep.images and again.lie.label == "gl2"


def test_ad_action_of_sign():
    pres, rep = load_group("z2_order2.pres", "z2_order2_sign_gl2.rep")
    A = ad_action(rep, ((0, 1),))
    # conjugation by diag(1, -1) flips the off-diagonal units
    assert [A[i][i] for i in range(4)] == [1, -1, -1, 1]


def _poly_mat_mul(A, B, K):
    """Matrices over Q[t]/t^K as lists of coefficient matrices, with Fractions."""
    d = len(A[0])
    out = [[[Fraction(0)] * d for _ in range(d)] for _ in range(K)]
    for a in range(K):
        for b in range(K - a):
            for i in range(d):
                for j in range(d):
                    out[a + b][i][j] += sum(A[a][i][k] * B[b][k][j] for k in range(d))
    return out


def _poly_exp(N, K):
    d = len(N[0])
    ident = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    term = [ident] + [[[Fraction(0)] * d for _ in range(d)] for _ in range(K - 1)]
    total = [[r[:] for r in M] for M in term]
    for n in range(1, K):
        term = _poly_mat_mul(term, N, K)
        term = [[[x / n for x in r] for r in M] for M in term]
        total = [[[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(M1, M2)] for M1, M2 in zip(total, term)]
    return total


def test_evaluate_word_matches_naive_series():
    rng = random.Random(4)
    K = 4
    A = ArtinAlgebra(1, K)
    pres = Presentation(("a", "b"), ())
    sl2 = LinearGroupData.sl(2)
    rho = Representation(pres, sl2, [[[1, 1], [0, 1]], [[2, 0], [1, Fraction(1, 2)]]])
    for _ in range(5):
        coeffs = {g: [[rng.randint(-2, 2) for _ in range(K)] for _ in range(3)] for g in range(2)}
        pert = {}
        naive = {}
        for g in range(2):
            cs = coeffs[g]
            pert[g] = [A.element({(k,): cs[b][k] for k in range(1, K)}) for b in range(3)]
            N = [[[Fraction(0)] * 2 for _ in range(2)] for _ in range(K)]
            for k in range(1, K):
                for b in range(3):
                    for i in range(2):
                        for j in range(2):
                            N[k][i][j] += cs[b][k] * Fraction(int(sl2.basis[b][i][j]))
            base = [[[Fraction(x) for x in r] for r in rho.images[g]]] + [[[Fraction(0)] * 2] * 2] * (K - 1)
            naive[g] = _poly_mat_mul(base, _poly_exp(N, K), K)
        word = ((0, 1), (1, 1), (0, 1))
        got = evaluate_word(rho, word, A, pert)
        want = _poly_mat_mul(_poly_mat_mul(naive[0], naive[1], K), naive[0], K)
        for k in range(K):
            assert [[Fraction(int(x.numerator), int(x.denominator)) for x in r] for r in got.block((k,))] == want[k]


def test_evaluate_word_without_ring():
    pres, rep = load_group("z2_order2.pres", "z2_order2_sign_gl2.rep")
    assert evaluate_word(rep, ((0, 1), (0, 1))) == identity(2)
    with pytest.raises(ValueError):
        evaluate_word(rep, ((0, 1),), None, {0: [Q(1)] * 4})
