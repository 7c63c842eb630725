"""Exact function-field arithmetic on the projective line over Q.

Points are rationals or the point at infinity; divisors are finite formal
sums; rational functions are kept factored as c * prod (t - a_i)^{e_i}, so
divisors, products and inverses are exact and evaluation never loses the
multiplicity information.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class NotDegreeZero(ValueError):
    """principal_function needs a degree-zero divisor."""


class _Pole:
    """Marker returned when evaluating at a pole.  A value, not an error."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "POLE"


POLE = _Pole()


@dataclass(frozen=True)
class CurvePoint:
    """A rational point of the line: a reduced fraction or infinity."""

    finite: Fraction | None = None

    @classmethod
    def of(cls, value) -> "CurvePoint":
        return cls(Fraction(value))

    @classmethod
    def infinity(cls) -> "CurvePoint":
        return cls(None)

    @property
    def is_infinity(self) -> bool:
        return self.finite is None

    def sort_key(self):
        if self.finite is None:
            return (1, Fraction(0))
        return (0, self.finite)

    def __repr__(self) -> str:
        return "inf" if self.finite is None else str(self.finite)


INFINITY = CurvePoint.infinity()


@dataclass(frozen=True)
class CDivisor:
    """Formal sum of points with nonzero integer multiplicities."""

    entries: tuple[tuple[CurvePoint, int], ...]

    def __post_init__(self) -> None:
        pts = [p for p, _ in self.entries]
        if len(set(pts)) != len(pts):
            raise ValueError("divisor points must be distinct")
        if any(m == 0 for _, m in self.entries):
            raise ValueError("zero multiplicities are not stored")
        canon = tuple(sorted(self.entries, key=lambda e: e[0].sort_key()))
        object.__setattr__(self, "entries", canon)

    @classmethod
    def of(cls, mapping) -> "CDivisor":
        items = mapping.items() if isinstance(mapping, dict) else mapping
        acc: dict[CurvePoint, int] = {}
        for p, m in items:
            if not isinstance(p, CurvePoint):
                p = CurvePoint.of(p)
            acc[p] = acc.get(p, 0) + m
        return cls(tuple((p, m) for p, m in acc.items() if m))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.entries)

    @property
    def is_reduced(self) -> bool:
        return all(m == 1 for _, m in self.entries)

    def support(self) -> frozenset[CurvePoint]:
        return frozenset(p for p, _ in self.entries)

    def multiplicity(self, p: CurvePoint) -> int:
        for q, m in self.entries:
            if q == p:
                return m
        return 0

    def __add__(self, other: "CDivisor") -> "CDivisor":
        return CDivisor.of(list(self.entries) + list(other.entries))

    def __neg__(self) -> "CDivisor":
        return CDivisor(tuple((p, -m) for p, m in self.entries))

    def scale(self, k: int) -> "CDivisor":
        if k == 0:
            return CDivisor(())
        return CDivisor(tuple((p, k * m) for p, m in self.entries))


@dataclass(frozen=True)
class RationalFunction:
    """c * prod (t - root)^exp with distinct rational roots and c != 0."""

    constant: Fraction
    factors: tuple[tuple[Fraction, int], ...]

    def __post_init__(self) -> None:
        c = Fraction(self.constant)
        if c == 0:
            raise ValueError("the zero function is not representable")
        roots = [r for r, _ in self.factors]
        if len(set(roots)) != len(roots):
            raise ValueError("factor roots must be distinct")
        if any(e == 0 for _, e in self.factors):
            raise ValueError("zero exponents are not stored")
        canon = tuple(
            sorted(((Fraction(r), e) for r, e in self.factors), key=lambda f: f[0])
        )
        object.__setattr__(self, "constant", c)
        object.__setattr__(self, "factors", canon)

    @classmethod
    def one(cls) -> "RationalFunction":
        return cls(Fraction(1), ())

    @classmethod
    def of(cls, constant, factors) -> "RationalFunction":
        items = factors.items() if isinstance(factors, dict) else factors
        acc: dict[Fraction, int] = {}
        for r, e in items:
            r = Fraction(r)
            acc[r] = acc.get(r, 0) + e
        return cls(Fraction(constant), tuple((r, e) for r, e in acc.items() if e))

    @property
    def order_at_infinity(self) -> int:
        return -sum(e for _, e in self.factors)

    def order_at(self, p: CurvePoint) -> int:
        if p.is_infinity:
            return self.order_at_infinity
        for r, e in self.factors:
            if r == p.finite:
                return e
        return 0

    def divisor(self) -> CDivisor:
        entries = [(CurvePoint(r), e) for r, e in self.factors]
        o = self.order_at_infinity
        if o:
            entries.append((INFINITY, o))
        return CDivisor.of(entries)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction.of(
            self.constant * other.constant, self.factors + other.factors
        )

    def inverse(self) -> "RationalFunction":
        return RationalFunction(
            1 / self.constant, tuple((r, -e) for r, e in self.factors)
        )

    def __pow__(self, k: int) -> "RationalFunction":
        if k == 0:
            return RationalFunction.one()
        return RationalFunction(
            self.constant ** k, tuple((r, k * e) for r, e in self.factors)
        )

    def scale(self, c) -> "RationalFunction":
        return RationalFunction(self.constant * Fraction(c), self.factors)


def principal_function(divisor: CDivisor) -> RationalFunction:
    """The monic-normalized function with the given degree-zero divisor.

    Finite points become factors; the multiplicity at infinity is forced to
    minus the finite total, which is exactly the degree-zero condition.
    """
    if divisor.degree != 0:
        raise NotDegreeZero(f"divisor has degree {divisor.degree}")
    factors = tuple(
        (p.finite, m) for p, m in divisor.entries if not p.is_infinity
    )
    f = RationalFunction(Fraction(1), factors)
    assert f.divisor() == divisor
    return f


def evaluate_with_derivative(f: RationalFunction, p: CurvePoint):
    """(f(p), f'(p)) as exact rationals, or POLE.

    At infinity the local coordinate is s = 1/t and the derivative is taken
    in s, so an order-m zero at infinity reports (0, 0) for m > 1.
    """
    if p.is_infinity:
        m = f.order_at_infinity
        if m < 0:
            return POLE
        # g(s) = f(1/s) = c * s^m * prod (1 - a_i s)^{e_i}
        if m > 1:
            return Fraction(0), Fraction(0)
        if m == 1:
            return Fraction(0), f.constant
        value = f.constant
        deriv = -f.constant * sum(
            Fraction(e) * r for r, e in f.factors
        )
        return value, deriv

    t = p.finite
    here = 0
    for r, e in f.factors:
        if r == t:
            here = e
            break
    if here < 0:
        return POLE
    if here > 1:
        return Fraction(0), Fraction(0)
    rest = f.constant
    for r, e in f.factors:
        if r != t:
            rest *= (t - r) ** e
    if here == 1:
        return Fraction(0), rest
    log_deriv = sum(Fraction(e, 1) / (t - r) for r, e in f.factors)
    return rest, rest * log_deriv


_MASK = (1 << 64) - 1


def _mix(z: int) -> int:
    """splitmix64 avalanche; deterministic across platforms."""
    z = (z + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _hash_rational(seed: int, counter: int) -> Fraction:
    h = _mix((_mix(seed & _MASK) + counter) & _MASK)
    num = (h % 241) - 120
    den = 1 + ((h >> 32) % 4)
    return Fraction(num, den)


def sample_divisor(degree: int, seed: int, avoid=frozenset()) -> CDivisor:
    """Reduced degree-`degree` divisor of fresh finite points.

    Deterministic in (degree, seed, avoid): candidates come from a counter
    hash stream; anything in `avoid` or already chosen is skipped.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    avoid_points = set()
    for p in avoid:
        if isinstance(p, CurvePoint):
            avoid_points.add(p)
        else:
            avoid_points.add(CurvePoint.of(p))
    chosen: list[CurvePoint] = []
    counter = 0
    while len(chosen) < degree:
        candidate = CurvePoint(_hash_rational(seed, counter))
        counter += 1
        if candidate in avoid_points:
            continue
        avoid_points.add(candidate)
        chosen.append(candidate)
        if counter > 100000:
            raise RuntimeError("candidate stream exhausted")
    return CDivisor(tuple((p, 1) for p in chosen))


class ProjectiveLine:
    """The genus-zero curve every embedding here is built on.

    The genus shows up only through the sampling threshold (degrees must
    exceed twice the genus), which is vacuous at zero; the hook keeps the
    arithmetic-genus dependence explicit.
    """

    def genus(self) -> int:
        return 0

    def sample_divisor(self, degree: int, seed: int, avoid=frozenset()) -> CDivisor:
        return sample_divisor(degree, seed, avoid)

    def principal_function(self, divisor: CDivisor) -> RationalFunction:
        return principal_function(divisor)

    def evaluate_with_derivative(self, f: RationalFunction, p: CurvePoint):
        return evaluate_with_derivative(f, p)
