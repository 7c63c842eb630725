"""Intersection numbers, ampleness and positive kernel vectors on toric 3-folds.

Divisors are integer coefficient vectors over the fan's rays.  All triple
intersection numbers reduce to degrees on wall curves through the exact wall
relations; nothing is ever rounded.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

from .fan import Fan, Wall, cone_matrix, ray_matrix, walls, _cone_set
from .feasibility import Infeasible, find_point, minimize
from .intlinalg import IntMatrix, integer_kernel_basis, smith_normal_form, unimodular_inverse


class NotAmple(ValueError):
    """The given divisor is not ample (strict positivity fails somewhere)."""


class NotProjective(ValueError):
    """The fan admits no ample divisor; carries a Farkas certificate."""

    def __init__(self, message: str, certificate=None, constraints=None):
        super().__init__(message)
        self.certificate = certificate or {}
        self.constraints = constraints or []


class NoPositiveKernel(ValueError):
    """No strictly positive integer vector in the ray matrix kernel."""


@dataclass(frozen=True)
class TDivisor:
    """Toric divisor sum_rho coeffs[rho] * V_rho."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in self.coeffs):
            raise ValueError("divisor coefficients must be ints")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @classmethod
    def zero(cls, fan: Fan) -> "TDivisor":
        return cls((0,) * fan.n_rays)

    @classmethod
    def unit(cls, fan: Fan, rho: int) -> "TDivisor":
        return cls(tuple(1 if t == rho else 0 for t in range(fan.n_rays)))

    def __add__(self, other: "TDivisor") -> "TDivisor":
        return TDivisor(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "TDivisor":
        return TDivisor(tuple(-a for a in self.coeffs))

    def scale(self, k: int) -> "TDivisor":
        return TDivisor(tuple(k * a for a in self.coeffs))


@dataclass(frozen=True)
class XiVector:
    """Strictly positive integer degrees, one per ray, in the ray matrix kernel."""

    values: tuple[int, ...]
    method: str


@lru_cache(maxsize=None)
def _wall_by_pair(fan: Fan) -> dict[tuple[int, int], Wall]:
    return {(w.i, w.j): w for w in walls(fan)}


def wall_curve_degree(fan: Fan, wall: Wall, divisor: TDivisor) -> int:
    """Degree of O(divisor) on the curve dual to the wall.

    Restriction along the wall relation n_k + n_l + a n_i + b n_j = 0 gives
    deg = c_k + c_l + a c_i + b c_j.
    """
    c = divisor.coeffs
    return c[wall.third_a] + c[wall.third_b] + wall.a * c[wall.i] + wall.b * c[wall.j]


def _hnf_rows(rows: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Row echelon lattice basis with positive pivots, entries above reduced."""
    work = [list(r) for r in rows if any(r)]
    m = len(work)
    n = len(work[0]) if m else 0
    r = 0
    for col in range(n):
        while True:
            nz = [i for i in range(r, m) if work[i][col]]
            if len(nz) <= 1:
                break
            piv = min(nz, key=lambda i: abs(work[i][col]))
            for i in nz:
                if i != piv:
                    q = work[i][col] // work[piv][col]
                    work[i] = [x - q * y for x, y in zip(work[i], work[piv])]
        nz = [i for i in range(r, m) if work[i][col]]
        if not nz:
            continue
        work[r], work[nz[0]] = work[nz[0]], work[r]
        if work[r][col] < 0:
            work[r] = [-x for x in work[r]]
        for i in range(r):
            q = work[i][col] // work[r][col]
            if q:
                work[i] = [x - q * y for x, y in zip(work[i], work[r])]
        r += 1
    return [tuple(row) for row in work[:r]]


def _reduce_mod_rows(v, hrows) -> tuple[int, ...]:
    out = list(v)
    for row in hrows:
        p = next(i for i, x in enumerate(row) if x)
        q = out[p] // row[p]
        if q:
            out = [x - q * y for x, y in zip(out, row)]
    return tuple(out)


@lru_cache(maxsize=None)
def _character_pairing_neg_one(ray: tuple[int, int, int]) -> tuple[int, int, int]:
    """Canonical character m with <m, ray> = -1 for a primitive ray.

    Particular solution from the Smith form of the ray as a column, then the
    canonical representative modulo the rank-2 sublattice pairing to zero.
    """
    snf = smith_normal_form(IntMatrix(3, 1, tuple(ray)))
    if snf.S[0, 0] != 1:
        raise ValueError(f"ray {ray} is not primitive")
    v = snf.V[0, 0]
    u_rows = snf.U.to_rows()
    m0 = tuple(-v * x for x in u_rows[0])
    kernel = _hnf_rows([tuple(u_rows[1]), tuple(u_rows[2])])
    m = _reduce_mod_rows(m0, kernel)
    assert sum(a * b for a, b in zip(m, ray)) == -1
    return m


def _two_repeat(fan: Fan, rep: int, other: int) -> int:
    """V_rep . V_rep . V_other for rep != other."""
    wall = _wall_by_pair(fan).get((min(rep, other), max(rep, other)))
    if wall is None:
        return 0  # the two divisors do not meet
    return wall_curve_degree(fan, wall, TDivisor.unit(fan, rep))


def _self_triple(fan: Fan, rho: int) -> int:
    # shift V_rho off itself: V_rho ~ V_rho + div(m) with <m, n_rho> = -1
    m = _character_pairing_neg_one(fan.rays[rho])
    total = 0
    for other in range(fan.n_rays):
        if other == rho:
            continue
        w = sum(a * b for a, b in zip(m, fan.rays[other]))
        if w:
            total += w * _two_repeat(fan, rho, other)
    return total


def triple_intersection(fan: Fan, i: int, j: int, k: int) -> int:
    """V_i . V_j . V_k as an exact integer."""
    for idx in (i, j, k):
        if not 0 <= idx < fan.n_rays:
            raise ValueError(f"ray index out of range: {idx}")
    a, b, c = sorted((i, j, k))
    if a == b == c:
        return _self_triple(fan, a)
    if a == b:
        return _two_repeat(fan, a, c)
    if b == c:
        return _two_repeat(fan, b, a)
    return 1 if (a, b, c) in _cone_set(fan) else 0


def triple_product(fan: Fan, d1: TDivisor, d2: TDivisor, d3: TDivisor) -> int:
    """Trilinear extension of triple_intersection to divisors."""
    for d in (d1, d2, d3):
        if len(d.coeffs) != fan.n_rays:
            raise ValueError("divisor length does not match fan")
    total = 0
    for p, cp in enumerate(d1.coeffs):
        if not cp:
            continue
        for q, cq in enumerate(d2.coeffs):
            if not cq:
                continue
            for s, cs in enumerate(d3.coeffs):
                if cs:
                    total += cp * cq * cs * triple_intersection(fan, p, q, s)
    return total


def _cone_character(fan: Fan, cone, coeffs) -> tuple[int, ...]:
    """m with <m, n_rho> = -coeffs[rho] for the cone's three rays."""
    inv = unimodular_inverse(cone_matrix(fan, cone).transpose())
    return inv.mul_vector([-coeffs[rho] for rho in cone])


def is_ample(fan: Fan, divisor: TDivisor) -> bool:
    """Strict convexity of the support function across every wall.

    Crossing each wall once suffices: the characters of adjacent cones agree
    on the wall, so their difference is a multiple of the wall's defining
    functional and the strict inequality is symmetric in the two sides.
    """
    if len(divisor.coeffs) != fan.n_rays:
        raise ValueError("divisor length does not match fan")
    chars: dict = {}
    for wall in walls(fan):
        m = chars.get(wall.cone_a)
        if m is None:
            m = chars[wall.cone_a] = _cone_character(fan, wall.cone_a, divisor.coeffs)
        n_l = fan.rays[wall.third_b]
        if sum(a * b for a, b in zip(m, n_l)) <= -divisor.coeffs[wall.third_b]:
            return False
    return True


def _wall_inequalities(fan: Fan, gauge) -> tuple[list, list[int]]:
    """Wall positivity as linear forms over the non-gauge coefficients.

    The support-function inequality across a wall equals wall_curve_degree
    of the coefficient vector (substitute the wall relation), so each row is
    that linear form with the gauge rays' variables dropped.
    """
    free = [rho for rho in range(fan.n_rays) if rho not in gauge]
    pos = {rho: t for t, rho in enumerate(free)}
    rows = []
    for wall in walls(fan):
        coeffs = [0] * len(free)
        for rho, weight in (
            (wall.third_a, 1),
            (wall.third_b, 1),
            (wall.i, wall.a),
            (wall.j, wall.b),
        ):
            if rho in pos:
                coeffs[pos[rho]] += weight
        rows.append((tuple(coeffs), 1))
    return rows, free


def find_ample(fan: Fan) -> TDivisor:
    """Deterministic ample divisor, or NotProjective with a Farkas certificate.

    Divisors differing by div(m) give the same geometry, so the three rays of
    the first maximal cone are gauge-fixed to coefficient zero.  Margin 1 is
    exact: the system is homogeneous, so strict feasibility scales.
    """
    gauge = fan.max_cones[0]
    rows, free = _wall_inequalities(fan, gauge)
    try:
        point = find_point(rows, len(free))
    except Infeasible as exc:
        raise NotProjective(
            "no ample divisor exists: wall positivity is infeasible",
            certificate=exc.certificate,
            constraints=rows,
        ) from exc
    scale = lcm(*(f.denominator for f in point)) if point else 1
    coeffs = [0] * fan.n_rays
    for rho, value in zip(free, point):
        scaled = value * scale
        assert scaled.denominator == 1
        coeffs[rho] = int(scaled)
    result = TDivisor(tuple(coeffs))
    assert is_ample(fan, result)
    return result


def _scale_for_genus(values, genus: int) -> tuple[int, ...]:
    # smallest k >= 1 with k*min(values) > 2*genus
    k = (2 * genus) // min(values) + 1
    return tuple(k * v for v in values)


def xi_vector(fan: Fan, ample: TDivisor | None, method: str = "intersection",
              genus: int = 0) -> XiVector:
    """Strictly positive integer kernel vector of the ray matrix.

    intersection: degrees of the rays' divisors against the square of an
    ample divisor.  kernel: exact feasibility over the integer kernel basis,
    minimizing the coefficient sum, scaled back to integers.
    """
    A = ray_matrix(fan)
    if method == "intersection":
        if ample is None or not is_ample(fan, ample):
            raise NotAmple("intersection method needs an ample divisor")
        values = tuple(
            triple_product(fan, ample, ample, TDivisor.unit(fan, j))
            for j in range(fan.n_rays)
        )
    elif method == "kernel":
        basis = integer_kernel_basis(A)
        if not basis:
            raise NoPositiveKernel("ray matrix has trivial kernel")
        rows = [
            (tuple(vec[j] for vec in basis), 1) for j in range(fan.n_rays)
        ]
        objective = tuple(sum(vec) for vec in basis)
        try:
            _, y = minimize(objective, rows, len(basis))
        except Infeasible as exc:
            raise NoPositiveKernel("no positive combination of kernel basis") from exc
        rat = [
            sum(Fraction(vec[j]) * y[t] for t, vec in enumerate(basis))
            for j in range(fan.n_rays)
        ]
        scale = lcm(*(f.denominator for f in rat))
        values = tuple(int(f * scale) for f in rat)
    else:
        raise ValueError(f"unknown method {method!r}")

    if min(values) <= 0:
        raise NoPositiveKernel(f"derived degrees are not strictly positive: {values}")
    assert A.mul_vector(values) == (0, 0, 0)
    values = _scale_for_genus(values, genus)
    return XiVector(values, method)
