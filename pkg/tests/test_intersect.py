"""Intersection numbers, ampleness and degree vectors against the quotient-ring oracle."""

import random
from fractions import Fraction

import pytest

from oracles import ChowOracle, farkas_refutes
from toricurve.fan import preset, star_subdivision, walls
from toricurve.feasibility import verify_infeasibility_certificate
from toricurve.intersect import (
    NoPositiveKernel,
    NotAmple,
    NotProjective,
    TDivisor,
    find_ample,
    is_ample,
    triple_intersection,
    triple_product,
    wall_curve_degree,
    xi_vector,
)

_ORACLES = {}


def oracle_for(fan):
    if fan.name not in _ORACLES:
        _ORACLES[fan.name] = ChowOracle(fan.rays, fan.max_cones)
    return _ORACLES[fan.name]


def unit(n, j):
    coeffs = [0] * n
    coeffs[j] = 1
    return coeffs


def principal_coeffs(fan, m):
    """Coefficients of the divisor of the character m."""
    return [sum(m[c] * ray[c] for c in range(3)) for ray in fan.rays]


def test_wall_degree_goldens(p3, p1p1p1):
    by_pair = {(w.i, w.j): w for w in walls(p1p1p1)}
    w = by_pair[(0, 2)]  # <e1, e2>
    assert wall_curve_degree(p1p1p1, w, TDivisor.unit(p1p1p1, 4)) == 1
    assert wall_curve_degree(p1p1p1, w, TDivisor.unit(p1p1p1, 0)) == 0
    w3 = {(w.i, w.j): w for w in walls(p3)}[(0, 1)]
    assert wall_curve_degree(p3, w3, TDivisor.unit(p3, 0)) == 1


def test_wall_degree_matches_oracle():
    """Every wall degree is the Chow product of the two spanning divisors."""
    for name in ("p3", "p1p1p1", "bl-p3-point"):
        fan = preset(name)
        oracle = oracle_for(fan)
        n = fan.n_rays
        for w in walls(fan):
            for rho in range(n):
                got = wall_curve_degree(fan, w, TDivisor.unit(fan, rho))
                want = oracle.triple_product(unit(n, w.i), unit(n, w.j), unit(n, rho))
                assert got == want


def test_triple_goldens(p3, p1p1p1, blp3):
    assert triple_intersection(p3, 0, 1, 2) == 1
    assert triple_intersection(p3, 0, 0, 0) == 1
    assert triple_intersection(p1p1p1, 0, 1, 2) == 0  # e1, -e1 never meet
    assert triple_intersection(p1p1p1, 0, 2, 4) == 1
    assert triple_intersection(p1p1p1, 0, 0, 2) == 0
    assert triple_intersection(blp3, 4, 4, 4) == 1  # exceptional divisor cubed


def test_all_triples_match_oracle():
    for name in ("p3", "p1p1p1", "bl-p3-point"):
        fan = preset(name)
        oracle = oracle_for(fan)
        n = fan.n_rays
        for i in range(n):
            for j in range(i, n):
                for k in range(j, n):
                    assert triple_intersection(fan, i, j, k) == oracle.triple(i, j, k)


def test_triple_symmetry(blp3):
    rng = random.Random(21)
    for _ in range(20):
        i, j, k = (rng.randrange(blp3.n_rays) for _ in range(3))
        base = triple_intersection(blp3, i, j, k)
        order = [i, j, k]
        rng.shuffle(order)
        assert triple_intersection(blp3, *order) == base


def test_triple_product_trilinear_matches_oracle(blp3):
    rng = random.Random(22)
    oracle = oracle_for(blp3)
    n = blp3.n_rays
    for _ in range(10):
        cs = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(3)]
        got = triple_product(blp3, *(TDivisor(tuple(c)) for c in cs))
        assert got == oracle.triple_product(*cs)


def test_linear_equivalence_invariance():
    """Adding the divisor of a character never changes a triple product."""
    rng = random.Random(23)
    for name in ("p3", "p1p1p1", "bl-p3-point"):
        fan = preset(name)
        n = fan.n_rays
        for _ in range(8):
            ds = [TDivisor(tuple(rng.randint(-2, 2) for _ in range(n))) for _ in range(3)]
            base = triple_product(fan, *ds)
            m = tuple(rng.randint(-2, 2) for _ in range(3))
            shift = TDivisor(tuple(principal_coeffs(fan, m)))
            moved = triple_product(fan, ds[0] + shift, ds[1], ds[2])
            assert moved == base


def test_is_ample_goldens(p3, p1p1p1):
    assert is_ample(p3, TDivisor.unit(p3, 0))
    assert not is_ample(p3, TDivisor.unit(p3, 0).scale(-1))
    assert not is_ample(p1p1p1, TDivisor.unit(p1p1p1, 0))  # nef only
    anticanonical = TDivisor(tuple([1] * 6))
    assert is_ample(p1p1p1, anticanonical)


def test_ample_iff_positive_wall_degrees():
    """Strict convexity must coincide with positivity on every wall curve."""
    rng = random.Random(24)
    for name in ("p3", "p1p1p1", "bl-p3-point"):
        fan = preset(name)
        n = fan.n_rays
        for _ in range(12):
            d = TDivisor(tuple(rng.randint(-2, 3) for _ in range(n)))
            positive = all(
                wall_curve_degree(fan, w, d) > 0 for w in walls(fan)
            )
            assert is_ample(fan, d) == positive


def test_find_ample_deterministic_goldens(p3, p1p1p1, blp3):
    assert find_ample(p3).coeffs == (0, 0, 0, 1)
    assert find_ample(p1p1p1).coeffs == (0, 1, 0, 1, 0, 1)
    assert find_ample(blp3).coeffs == (0, 0, 2, 0, 1)
    for fan in (p3, p1p1p1, blp3):
        assert is_ample(fan, find_ample(fan))


def test_find_ample_on_subdivisions():
    rng = random.Random(25)
    fan = preset("p3")
    for _ in range(3):
        fan = star_subdivision(fan, rng.choice(fan.max_cones))
        assert is_ample(fan, find_ample(fan))


def test_not_projective_fixture(nonprojective):
    """The twisted fixture is smooth and complete yet admits no ample divisor."""
    with pytest.raises(NotProjective) as err:
        find_ample(nonprojective)
    exc = err.value
    n_vars = len(exc.constraints[0][0])
    assert verify_infeasibility_certificate(exc.constraints, exc.certificate, n_vars)
    assert farkas_refutes(exc.constraints, exc.certificate, n_vars)


def test_xi_intersection_goldens(p3, p1p1p1, blp3):
    assert xi_vector(p3, TDivisor.unit(p3, 0)).values == (1, 1, 1, 1)
    total = TDivisor(tuple([1] * 6))
    assert xi_vector(p1p1p1, total).values == (8, 8, 8, 8, 8, 8)
    two_h_minus_e = TDivisor((0, 0, 0, 2, -1))
    assert xi_vector(blp3, two_h_minus_e).values == (3, 3, 3, 4, 1)


def test_xi_matches_oracle_degree_vector():
    """The golden degree vectors re-derive through the quotient ring."""
    cases = [
        ("p3", (1, 0, 0, 0), (1, 1, 1, 1)),
        ("p1p1p1", (1, 1, 1, 1, 1, 1), (8, 8, 8, 8, 8, 8)),
        ("bl-p3-point", (0, 0, 0, 2, -1), (3, 3, 3, 4, 1)),
    ]
    for name, coeffs, frozen in cases:
        fan = preset(name)
        oracle = oracle_for(fan)
        expansion = oracle.degree_vector(list(coeffs))
        assert expansion == tuple(Fraction(v) for v in frozen)
        assert xi_vector(fan, TDivisor(coeffs)).values == frozen


def test_xi_kernel_goldens(p3, p1p1p1, blp3):
    assert xi_vector(p3, None, method="kernel").values == (1, 1, 1, 1)
    assert xi_vector(p1p1p1, None, method="kernel").values == (1, 1, 1, 1, 1, 1)
    assert xi_vector(blp3, None, method="kernel").values == (1, 1, 1, 2, 1)


def test_xi_is_positive_kernel_vector():
    rng = random.Random(26)
    for name in ("p3", "p1p1p1", "bl-p3-point"):
        fan = preset(name)
        for method in ("intersection", "kernel"):
            ample = find_ample(fan) if method == "intersection" else None
            xi = xi_vector(fan, ample, method=method)
            assert min(xi.values) >= 1
            assert xi.method == method
            for c in range(3):
                assert sum(
                    xi.values[j] * fan.rays[j][c] for j in range(fan.n_rays)
                ) == 0
        sub = star_subdivision(fan, rng.choice(fan.max_cones))
        assert min(xi_vector(sub, find_ample(sub)).values) >= 1


def test_xi_genus_scaling(p3):
    """Degrees scale to clear twice the genus while staying in the kernel."""
    xi = xi_vector(p3, TDivisor.unit(p3, 0), genus=3)
    assert min(xi.values) > 6
    assert xi.values == (7, 7, 7, 7)


def test_xi_requires_ample(p3, p1p1p1):
    with pytest.raises(NotAmple):
        xi_vector(p3, None)
    with pytest.raises(NotAmple):
        xi_vector(p1p1p1, TDivisor.unit(p1p1p1, 0))


def test_xi_kernel_rejects_injective_matrix():
    from toricurve.fan import Fan

    fan = Fan(((1, 0, 0), (0, 1, 0), (0, 0, 1)), ((0, 1, 2),))
    with pytest.raises(NoPositiveKernel):
        xi_vector(fan, None, method="kernel")


def test_divisor_arithmetic(p3):
    d = TDivisor.unit(p3, 0) + TDivisor.unit(p3, 1).scale(3)
    assert d.coeffs == (1, 3, 0, 0)
    assert (-d).coeffs == (-1, -3, 0, 0)
    assert TDivisor.zero(p3).coeffs == (0, 0, 0, 0)
    with pytest.raises(ValueError):
        triple_product(p3, d, d, TDivisor((1, 0, 0)))
