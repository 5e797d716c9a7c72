import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import data_text, random_complex_cone
from quadgerm.cones import (
    InhomogeneousError, WeightedCone, check_homogeneous, cone_compare_sampled, dump_cone,
    functor_points, halve_weights, is_quadratic, load_cone, realify,
)
from quadgerm.exactalg import ArtinAlgebra, GaussianRational, I, Q


def test_fixtures_load():
    c = load_cone(data_text("commuting_cone.json"))
    assert is_quadratic(c) and c.nvars == 6 and len(c.relations) == 3
    w = load_cone(data_text("weighted_cone.json"))
    assert not is_quadratic(w) and w.degrees == [4, 4]
    assert not load_cone(data_text("complex_cone.json")).is_real()


def test_inhomogeneous_rejected_and_located():
    text = data_text("inhomogeneous_cone.json")
    with pytest.raises(InhomogeneousError):
        load_cone(text)
    c = load_cone(text, validate=False)
    rep = check_homogeneous(c)
    assert not rep.ok and "offending" in rep.relations[0]
    with pytest.raises(InhomogeneousError):
        realify(c)


def test_halving():
    w = load_cone(data_text("weighted_cone.json"))
    h = halve_weights(w)
    assert h.weights == [1, 1, 2] and h.degrees == [2, 2]
    with pytest.raises(ValueError):
        halve_weights(WeightedCone(["x"], [1], ["x^2"]))


def test_round_trip():
    for name in ["commuting_cone.json", "weighted_cone.json", "complex_cone.json"]:
        c = load_cone(data_text(name))
        assert load_cone(dump_cone(c)) == c


def test_functor_points_over_artin():
    c = WeightedCone(["x", "y"], [1, 1], ["x*y"])
    A = ArtinAlgebra(1, 3)
    t = A.gen()
    assert functor_points(c, A, [t, t * t])  # t^3 = 0
    assert not functor_points(c, A, [t, t])
    with pytest.raises(ValueError):
        functor_points(c, A, [A.one(), t])


def test_realify_small_example():
    c = WeightedCone(["z"], [1], ["z^2"])
    r = realify(c)
    assert r.relation_strings() == ["z_re^2 - z_im^2", "2*z_re*z_im"]
    assert r.is_real() and r.degrees == [2, 2]


def _recombine(A, xs, ys):
    """x + i y as an element with Gaussian coefficients."""
    return [x + y * A.scalar(I) for x, y in zip(xs, ys)]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_realify_points_match(seed):
    rng = random.Random(seed)
    c, root = random_complex_cone(rng)
    r = realify(c)
    assert r.nvars == 2 * c.nvars and len(r.relations) == 2 * len(c.relations)
    for d, (d1, d2) in zip(c.degrees, zip(r.degrees[::2], r.degrees[1::2])):
        assert d == d1 == d2
    A = ArtinAlgebra(1, 3)
    t = A.gen()
    for _ in range(10):
        if rng.random() < 0.5:  # scaled known root, weight-homogeneous
            xs = [t ** w * x.re if isinstance(x, GaussianRational) else t ** w * x for x, w in zip(root, c.weights)]
            ys = [t ** w * x.im if isinstance(x, GaussianRational) else A.zero() for x, w in zip(root, c.weights)]
        else:
            xs = [t * rng.randint(-1, 1) + t * t * rng.randint(-1, 1) for _ in c.weights]
            ys = [t * rng.randint(-1, 1) + t * t * rng.randint(-1, 1) for _ in c.weights]
        real_pt = [v for pair in zip(xs, ys) for v in pair]
        assert functor_points(r, A, real_pt) == functor_points(c, A, _recombine(A, xs, ys))


def test_compare_sampled_detects_mismatch():
    c = WeightedCone(["x", "y"], [1, 1], ["x*y"])
    same = cone_compare_sampled(c, c, {"x": "x", "y": "y"}, [ArtinAlgebra(1, 3)],
                                [[[1, 0], [0, 1]], [[1, 1], [1, 0]]])
    assert same.ok and same.checked == 2
    d = WeightedCone(["x", "y"], [1, 1], ["x^2"])
    diff = cone_compare_sampled(c, d, {"x": "x", "y": "y"}, [ArtinAlgebra(1, 3)], [[[1, 0], [0, 1]]])
    assert not diff.ok
    with pytest.raises(ValueError):
        cone_compare_sampled(c, d, {"x": "x^2", "y": "y"}, [ArtinAlgebra(1, 3)], [])


def test_weight_substitution_compare():
    # y = x^2 cut in weights (1, 2) against weights (2, 4) with t -> t^2
    c1 = WeightedCone(["x", "y"], [2, 4], ["x^2 - y"])
    c2 = WeightedCone(["x", "y"], [1, 2], ["x^2 - y"])
    samples = [[[1, 0], [0, 1]], [[1, 0], [1, 0]], [[0, 1], [0, 0]]]

    def emb(A):
        B = ArtinAlgebra(1, 2 * A.order - 1)
        return B, [B.gen() * B.gen()]
    rep = cone_compare_sampled(c1, c2, {"x": "x", "y": "y"}, [ArtinAlgebra(1, 3)], samples, emb)
    assert rep.ok and rep.checked == 3
