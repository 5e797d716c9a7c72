import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (
    SL2, abelian, data_text, equivariant_instance, heisenberg, q_fixture, random_degree0, random_mc,
    t_power, torus_sl2,
)
from quadgerm.cones import functor_points
from quadgerm.dgla import (
    WDGLA, DGLAMorphism, MCElement, PreconditionError, bch, check_dgla_axioms, check_weight_axioms,
    chevalley_eilenberg, cohomology, cohomology_fixed_dims, curvature, dump_wdgla, exterior_algebra,
    gauge, invariants, is_mc, lie_dgla, lie_from_spec, load_wdgla, quotient, reduce_to_quadratic,
    subalgebra, tensor_dgla, truncate,
)
from quadgerm.dgla.builders import check_cdga_axioms
from quadgerm.dgla.equivariant import Augmentation, NotAutomorphic, augmentation_kernel
from quadgerm.dgla.io import WDGLAFormatError
from quadgerm.exactalg import (
    ArtinAlgebra, ArtinMatrix, Q, Subspace, matrix_exp_truncated, matrix_log_truncated,
)
from quadgerm.grouprep import LinearGroupData

GL1 = LinearGroupData.gl(1)


def _betti(A):
    """Cohomology of a CDGA, read through A (x) gl1."""
    H = cohomology(tensor_dgla(A, GL1))
    return [H.dim(j) for j in range(max(A.degrees) + 1)]


def test_ce_cohomology_of_small_lie_algebras():
    assert _betti(chevalley_eilenberg(abelian(3))) == [1, 3, 3, 1]
    assert _betti(chevalley_eilenberg(heisenberg())) == [1, 2, 2, 1]


def test_exterior_algebra_axioms():
    A = exterior_algebra(["a", "b", "c"], [1, 1, 2], {2: {(0, 1): 1}})
    assert not check_cdga_axioms(A)
    assert A.dim == 8


def test_fixture_axioms():
    L = load_wdgla(data_text("heisenberg_sl2.json"))
    assert L.dim == 24 and check_dgla_axioms(L).ok
    bad = check_dgla_axioms(load_wdgla(data_text("bad_jacobi.json")))
    assert not bad.ok and any(v["axiom"] == "Jacobi" for v in bad.violations)


def test_axiom_checker_catches_bad_differential():
    L = WDGLA(["x", "y"], [0, 1], [1, 1], d={0: {1: 1}}, bracket={(0, 0): {0: 1}})
    rep = check_dgla_axioms(L)
    assert not rep.ok
    assert {v["axiom"] for v in rep.violations} >= {"antisymmetry"}


def test_surface_cohomology():
    for genus in (1, 2):
        L = torus_sl2(genus)
        H = cohomology(L)
        n = 2 * genus
        assert [H.dim(j) for j in range(3)] == [3, 3 * n, 3 * n * (n - 1) // 2]


def test_io_round_trip():
    for name in ["heisenberg_sl2.json", "truncation_toy.json", "reduction_toy.json"]:
        L = load_wdgla(data_text(name))
        again = load_wdgla(dump_wdgla(L))
        assert json.loads(dump_wdgla(again)) == json.loads(dump_wdgla(L))
    with pytest.raises(WDGLAFormatError, match="line 1"):
        load_wdgla("{")
    with pytest.raises(WDGLAFormatError):
        load_wdgla('{"basis": [{"name": "x", "degree": 1}], "differential": [["x", "y", "1"]]}')
    assert lie_from_spec("abelian2").dim == 2 and lie_from_spec("sl3").dim == 8


def test_subalgebra_and_quotient_are_morphisms():
    L = torus_sl2(1)
    # ideal: everything in degree 2
    ideal = {(j, i): Subspace.full(len(L.block(j, i))) for (j, i) in L.bidegrees() if j == 2}
    Qt, pi = quotient(L, ideal)
    assert pi.is_morphism() and Qt.dim == L.dim - 3
    S, inc = subalgebra(L, {(0, 0): [[1, 0, 0]]})
    assert inc.is_morphism() and S.dim == 1
    assert DGLAMorphism.identity(L).is_morphism()


# --- MC, gauge, BCH -------------------------------------------------------------------

def _lie_matrix(A, coeffs):
    out = ArtinMatrix(A, 2, 2, {})
    for k, c in coeffs.items():
        out = out + ArtinMatrix.constant(A, SL2.basis[k]).scale_by_element(c)
    return out


def test_bch_matches_matrix_exp_log():
    L = lie_dgla(SL2)
    rng = random.Random(11)
    for order in (3, 4, 5):
        A = ArtinAlgebra(1, order)
        for _ in range(6):
            X, Y = random_degree0(L, A, rng), random_degree0(L, A, rng)
            Z = bch(L, A, X, Y)
            prod = matrix_exp_truncated(_lie_matrix(A, X)) @ matrix_exp_truncated(_lie_matrix(A, Y))
            assert matrix_log_truncated(prod) == _lie_matrix(A, Z)


def test_bch_two_variables():
    # noncommuting directions t1, t2 over m^3
    L = lie_dgla(SL2)
    A = ArtinAlgebra(2, 3)
    X = {0: A.gen(0)}
    Y = {1: A.gen(1)}
    Z = bch(L, A, X, Y)
    # X + Y + 1/2 [X, Y] and [e, f] = h
    assert Z == {0: A.gen(0), 1: A.gen(1), 2: A.gen(0) * A.gen(1) * Q(1, 2)}


def test_gauge_preserves_mc_and_composes():
    rng = random.Random(5)
    L = torus_sl2(1)
    A = ArtinAlgebra(1, 4)
    done = 0
    while done < 8:
        eta = random_mc(L, A, rng)
        if eta is None:
            continue
        a, b = random_degree0(L, A, rng), random_degree0(L, A, rng)
        g1 = gauge(L, A, a, eta)
        assert is_mc(L, A, g1)
        assert gauge(L, A, {}, eta).coeffs == MCElement(L, A, eta).coeffs
        assert gauge(L, A, b, g1) == gauge(L, A, bch(L, A, b, a), eta)
        done += 1


def test_curvature_detects_non_mc():
    L = torus_sl2(1)
    A = ArtinAlgebra(1, 3)
    t = t_power(A, 1)
    a_e, b_f = L.index["a1.e"], L.index["b1.f"]
    eta = {a_e: t, b_f: t}
    assert curvature(L, A, eta) and not is_mc(L, A, eta)
    with pytest.raises(ValueError):
        MCElement(L, A, {a_e: A.one()})


# --- equivariant -----------------------------------------------------------------------

def test_invariants_small():
    rng = random.Random(3)
    for group in ("Z2", "Z3", "S3"):
        L = equivariant_instance(rng, group)
        Linv, inc = invariants(L)
        assert inc.is_morphism()
        assert cohomology(Linv).dims() == {k: v for k, v in cohomology_fixed_dims(L).items() if v}


def test_non_automorphic_action_rejected():
    L = WDGLA(["x", "y"], [1, 2], [1, 2], d={0: {1: 1}}, action={"s": [[1, 0], [0, -1]]})
    with pytest.raises(NotAutomorphic):
        invariants(L)


def test_augmentation_kernel():
    L = tensor_dgla(exterior_algebra(["a"], [1]), SL2)
    G = lie_dgla(SL2)
    eps = Augmentation(G, {k: [Q(int(r == k)) for r in range(3)] for k in L.block(0)})
    K = augmentation_kernel(L, eps)
    assert K.surjective and K.lie_hom and K.h0_zero
    assert K.kernel.dim == 3


# --- weights, truncation, reduction --------------------------------------------------

def test_weight_axioms_modes():
    L = load_wdgla(data_text("heisenberg_sl2.json"))
    rep = check_weight_axioms(L, SL2)
    assert rep.ok and rep.mode == "g" and rep.h1_weights == [1]
    T = load_wdgla(data_text("truncation_toy.json"))
    rep = check_weight_axioms(T)
    assert rep.ok and rep.mode == "augmented"
    bad = WDGLA(["x", "y"], [1, 2], [3, 5])
    rep = check_weight_axioms(bad)
    assert not rep.ok and {v["weight"] for v in rep.violations} == {3, 5}


def test_truncation_fixture():
    T = truncate(load_wdgla(data_text("truncation_toy.json")))
    assert T.ok
    assert {k: v for k, v in T.ideal_dims.items() if v} == {(2, 5): 3, (3, 5): 3, (3, 6): 6}
    assert not T.Q.block(1, 4) and all(w < 5 for w in T.Q.weights)


def test_truncation_refuses_bad_weights():
    with pytest.raises(PreconditionError):
        truncate(WDGLA(["x"], [1], [3]))


def test_reduction_fixture():
    R = reduce_to_quadratic(load_wdgla(data_text("reduction_toy.json")))
    assert R.ok and R.cone.relation_strings() == ["x^2"]
    assert R.cone.weights == [1] and R.unhalved.weights == [2]


def test_reduction_refusals():
    R = reduce_to_quadratic(load_wdgla(data_text("impure_toy.json")))
    assert not R.ok and R.refusal["class"] == "a" and R.refusal["weight"] == 1
    # Z^1_3 != 0
    R = reduce_to_quadratic(WDGLA(["x", "y"], [1, 1], [2, 3]))
    assert not R.ok and R.refusal["weight"] == 3
    with pytest.raises(PreconditionError):
        reduce_to_quadratic(WDGLA(["x"], [1], [5]))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_reduction_mc_matches_cone_sampled(seed):
    rng = random.Random(seed)
    L = q_fixture(rng)
    R = reduce_to_quadratic(L)
    assert R.ok
    A = ArtinAlgebra(1, 3)
    idx = L.block(1)
    for _ in range(30):
        eta = {}
        for i in idx:
            v = A.zero()
            for k in (1, 2):
                c = rng.choice([0, 0, 1, -1])
                if c:
                    v = v + t_power(A, k, c)
            if v:
                eta[i] = v
        pt = R.cone_point(MCElement(L, A, eta))
        expect = pt is not None and functor_points(R.cone, A, pt)
        assert is_mc(L, A, eta) == expect
