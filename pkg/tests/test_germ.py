import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import SL2, load_group
from quadgerm.exactalg import ArtinAlgebra, Q, mat_mul
from quadgerm.germ import (
    InvalidInput, cocycle_spaces, deformation_oracle, lift_order, lift_step, obstruction,
    oracle_samples, presentation_complex, quadratic_cone,
)
from quadgerm.grouprep import Presentation, Representation


def _commutator(A, B):
    AB, BA = mat_mul(A, B), mat_mul(B, A)
    return [[x - y for x, y in zip(r, s)] for r, s in zip(AB, BA)]


def _split(u, k):
    """Generator blocks of a cocycle as sl2 matrices."""
    return [SL2.element(u[3 * i:3 * i + 3]) for i in range(k)]


@pytest.fixture(scope="module")
def z2():
    pres, rep = load_group("z2.pres", "z2_trivial_sl2.rep")
    return pres, rep, quadratic_cone(pres, rep)


def test_complex_is_a_complex():
    for names in [("z2.pres", "z2_trivial_sl2.rep"), ("heisenberg.pres", "heisenberg_trivial_sl2.rep"),
                  ("genus2.pres", "genus2_trivial_sl2.rep"), ("z2_order2.pres", "z2_order2_sign_gl2.rep")]:
        pres, rep = load_group(*names)
        c = presentation_complex(pres, rep)
        if c.m:
            assert all(not x for row in mat_mul(c.d1, c.d0) for x in row)


def test_cohomology_dimensions():
    # trivial coefficients: H^1 = Hom(H_1, sl2)
    expect = {("z2.pres", "z2_trivial_sl2.rep"): 6, ("free2.pres", "free2_trivial_sl2.rep"): 6,
              ("genus2.pres", "genus2_trivial_sl2.rep"): 12,
              ("heisenberg.pres", "heisenberg_trivial_sl2.rep"): 6,
              ("z2_order2.pres", "z2_order2_sign_gl2.rep"): 0}
    for names, h1 in expect.items():
        pres, rep = load_group(*names)
        assert cocycle_spaces(presentation_complex(pres, rep)).h1 == h1


def test_invalid_representation_rejected():
    pres, rep = load_group("z2.pres", "z2_bad.rep")
    with pytest.raises(InvalidInput):
        presentation_complex(pres, rep)


def test_z2_cone_is_the_commuting_variety(z2):
    pres, rep, cone = z2
    assert len(cone.relations) == 3
    assert all(p.degree() == 2 for p in cone.relations)
    rng = random.Random(1)
    for _ in range(150):
        u = [Q(rng.randint(-2, 2)) for _ in range(6)]
        if rng.random() < 0.3:  # force commuting pairs often
            u[3:] = [u[0] * 2, u[1] * 2, u[2] * 2]
        A, B = _split(u, 2)
        assert cone.contains(u) == all(not x for r in _commutator(A, B) for x in r)


def test_genus2_cone_matches_commutator_sum():
    pres, rep = load_group("genus2.pres", "genus2_trivial_sl2.rep")
    cone = quadratic_cone(pres, rep)
    assert len(cone.relations) == 3
    rng = random.Random(2)
    for _ in range(60):
        u = [Q(rng.randint(-1, 1)) for _ in range(12)]
        a1, b1, a2, b2 = _split(u, 4)
        s = [[x + y for x, y in zip(r, q)] for r, q in zip(_commutator(a1, b1), _commutator(a2, b2))]
        assert cone.contains(u) == all(not x for r in s for x in r)


def test_obstruction_vanishes_exactly_on_the_cone(z2):
    pres, rep, cone = z2
    c = cone.cochains
    for u in ([1, 0, 0, 2, 0, 0], [1, 0, 0, 0, 1, 0], [0, 0, 1, 0, 0, 3]):
        u = [Q(x) for x in u]
        assert (not any(obstruction(c, u))) == cone.contains(u)
    with pytest.raises(InvalidInput):
        cone.z1_coordinates([Q(1)] * 5)


def test_lift_certificates_verify(z2):
    pres, rep, cone = z2
    c = cone.cochains
    u = [Q(x) for x in (1, 2, 0, 2, 4, 0)]  # B = 2A commutes with A
    lo, cert = lift_order(c, u, 5)
    assert lo == 5 and cert.verify(c)
    lo, cert = lift_order(c, [Q(x) for x in (1, 0, 0, 0, 1, 0)], 5)
    assert lo == 1 and not cert.ok and any(cert.obstruction)


def test_lift_step_refuses_bad_partial(z2):
    pres, rep, cone = z2
    with pytest.raises(InvalidInput):
        lift_step(pres, rep, ArtinAlgebra(1, 4), [[Q(1), 0, 0, 0, Q(1), 0], [Q(0)] * 6],
                  cochains=cone.cochains)


def test_free_group_is_unobstructed():
    pres, rep = load_group("free2.pres", "free2_trivial_sl2.rep")
    rep_ = deformation_oracle(pres, rep, 4, count=30)
    assert rep_.agree and not rep_.cone.relations


def test_heisenberg_oracle_disagrees():
    pres, rep = load_group("heisenberg.pres", "heisenberg_trivial_sl2.rep")
    report = deformation_oracle(pres, rep, 3, count=40, seed=0)
    assert not report.cone.relations
    assert not report.agree
    assert all(d["in_cone"] and d["lift_order"] == 2 for d in report.disagreements)


def test_oracle_samples_deterministic():
    a = oracle_samples(4, 100, seed=7)
    assert a == oracle_samples(4, 100, seed=7)
    assert len(a) == 100 and a[:81] == sorted(a[:81])  # full grid first, in order
    b = oracle_samples(8, 50, seed=1)
    assert len(b) == 50 and all(x in (-1, 0, 1) for p in b for x in p)


def test_sign_rep_of_z2_is_rigid():
    pres, rep = load_group("z2_order2.pres", "z2_order2_sign_gl2.rep")
    cone = quadratic_cone(pres, rep)
    assert cone.Z1.dim == cone.spaces.b1


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=3, max_size=3), st.integers(-2, 2))
def test_abelian_deformations_of_cyclic_pairs_lift(a, k):
    # (A, kA) always commutes, so it lifts to every order
    pres = Presentation(("a", "b"), (((0, 1), (1, 1), (0, -1), (1, -1)),))
    rep = Representation.trivial(pres, SL2)
    c = presentation_complex(pres, rep)
    u = [Q(x) for x in a] + [Q(k * x) for x in a]
    lo, cert = lift_order(c, u, 4)
    assert lo == 4 and cert.verify(c)
