"""Assemble embedding data: divisors, the character homomorphism, charts.

An embedding candidate is a tuple of reduced pairwise-disjoint divisors
D_rho of degrees xi_rho plus the three functions eps_i = torus_i * f_i with
div(f_i) = sum_rho <m_i, n_rho> D_rho.  Charts expose the candidate in the
coordinates dual to each maximal cone.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .curve import (
    CDivisor,
    CurvePoint,
    ProjectiveLine,
    RationalFunction,
    evaluate_with_derivative,
    principal_function,
    _hash_rational,
)
from .fan import Fan, cone_matrix, fan_from_dict, fan_to_dict, primitive_collections, validate
from .intersect import TDivisor, XiVector
from .intlinalg import unimodular_inverse

Vec3 = tuple[int, int, int]


class XiMismatch(ValueError):
    """The degree vector does not fit the fan (kernel or positivity fails)."""


class BadEmbeddingFile(ValueError):
    """Embedding data file does not match the expected structure."""


@dataclass(frozen=True)
class EmbeddingData:
    fan: Fan
    ample: TDivisor | None
    xi: XiVector
    divisors: tuple[CDivisor, ...]
    epsilon: tuple[RationalFunction, RationalFunction, RationalFunction]
    torus: tuple[Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class ChartMap:
    """Coordinates of the candidate on the affine chart of one maximal cone."""

    cone: tuple[int, int, int]
    duals: tuple[Vec3, Vec3, Vec3]
    coords: tuple[RationalFunction, RationalFunction, RationalFunction]
    excluded: tuple[CurvePoint, ...]  # support of the divisors of rays off the cone


@dataclass(frozen=True)
class ConditionsReport:
    """Outcome of the two morphism conditions, with witnesses on failure."""

    disjointness_failures: tuple[tuple, ...]
    divisor_failures: tuple[tuple, ...]

    @property
    def passed(self) -> bool:
        return not self.disjointness_failures and not self.divisor_failures


def _check_xi(fan: Fan, xi: XiVector) -> None:
    if len(xi.values) != fan.n_rays:
        raise XiMismatch("degree vector length does not match the fan")
    if any(v <= 0 for v in xi.values):
        raise XiMismatch(f"degrees must be strictly positive: {xi.values}")
    for t in range(3):
        total = sum(ray[t] * v for ray, v in zip(fan.rays, xi.values))
        if total != 0:
            raise XiMismatch(
                f"degrees are not in the ray matrix kernel: coordinate {t} sums to {total}"
            )


def pairing_matrix(fan: Fan) -> list[list[int]]:
    """a[i][rho] = <m_i, n_rho> for the standard character basis."""
    return [[ray[i] for ray in fan.rays] for i in range(3)]


def build_embedding_data(
    fan: Fan,
    ample: TDivisor | None,
    xi: XiVector,
    seed: int,
    torus=(1, 1, 1),
    curve: ProjectiveLine | None = None,
) -> EmbeddingData:
    """Sample disjoint divisors and build the character functions.

    Sampling is a single seeded stream: each divisor avoids every point
    chosen before it, which is exactly global pairwise disjointness.
    """
    report = validate(fan)
    if not report.ok:
        raise ValueError(f"fan must be smooth and complete: {report.issues}")
    _check_xi(fan, xi)
    torus_f = tuple(Fraction(x) for x in torus)
    if len(torus_f) != 3 or any(x == 0 for x in torus_f):
        raise ValueError("torus element must be three nonzero rationals")
    if curve is None:
        curve = ProjectiveLine()
    if min(xi.values) <= 2 * curve.genus():
        raise XiMismatch("degrees must exceed twice the genus")

    avoid: set[CurvePoint] = set()
    divisors = []
    for rho in range(fan.n_rays):
        d = curve.sample_divisor(xi.values[rho], seed + rho, avoid)
        avoid |= d.support()
        divisors.append(d)

    a = pairing_matrix(fan)
    epsilon = []
    for i in range(3):
        combo = CDivisor(())
        for rho, d in enumerate(divisors):
            if a[i][rho]:
                combo = combo + d.scale(a[i][rho])
        assert combo.degree == 0  # xi is in the kernel, degrees cancel
        epsilon.append(principal_function(combo).scale(torus_f[i]))

    return EmbeddingData(
        fan=fan,
        ample=ample,
        xi=xi,
        divisors=tuple(divisors),
        epsilon=tuple(epsilon),
        torus=torus_f,
    )


def epsilon_function(data: EmbeddingData, m) -> RationalFunction:
    """eps(m) = prod eps_i^{m_i}; the homomorphism on the character lattice."""
    out = RationalFunction.one()
    for i in range(3):
        if m[i]:
            out = out * (data.epsilon[i] ** m[i])
    return out


def check_theorem_conditions(data: EmbeddingData) -> ConditionsReport:
    """Exactly decide the two conditions characterizing a morphism.

    Intersections of the D_rho over every primitive collection must be empty
    (any non-face contains a minimal one, so these suffice), and each div
    eps_i must equal the pairing combination of the divisors on the nose.
    """
    disjoint_failures = []
    for coll in primitive_collections(data.fan):
        shared = frozenset.intersection(
            *(data.divisors[rho].support() for rho in coll)
        )
        if shared:
            pts = tuple(sorted(shared, key=lambda p: p.sort_key()))
            disjoint_failures.append((coll, pts))

    a = pairing_matrix(data.fan)
    divisor_failures = []
    for i in range(3):
        expected = CDivisor(())
        for rho, d in enumerate(data.divisors):
            if a[i][rho]:
                expected = expected + d.scale(a[i][rho])
        actual = data.epsilon[i].divisor()
        if actual != expected:
            diff = actual + (-expected)
            divisor_failures.append((i, tuple(diff.entries)))

    return ConditionsReport(tuple(disjoint_failures), tuple(divisor_failures))


def chart_maps(data: EmbeddingData) -> tuple[ChartMap, ...]:
    """Per maximal cone: dual basis rows and the three coordinate functions."""
    charts = []
    for cone in data.fan.max_cones:
        inv = unimodular_inverse(cone_matrix(data.fan, cone))
        duals = tuple(inv.row(t) for t in range(3))
        coords = tuple(epsilon_function(data, l) for l in duals)
        excluded: set[CurvePoint] = set()
        for rho in range(data.fan.n_rays):
            if rho not in cone:
                excluded |= data.divisors[rho].support()
        ex = tuple(sorted(excluded, key=lambda p: p.sort_key()))
        for p in coords:
            # poles sit exactly on divisors of rays off the cone, and the
            # degree-zero divisors leave order 0 at infinity
            assert p.order_at_infinity == 0
            assert all(r in {q.finite for q in ex} for r, e in p.factors if e < 0)
        charts.append(ChartMap(cone, duals, coords, ex))
    return tuple(charts)


def transition_mismatches(data: EmbeddingData, charts, n_points: int, seed: int):
    """Spot-check that chart transitions are consistent Laurent monomials.

    For chart pairs and characters m in both dual cones, the monomial in
    either chart's coordinates must evaluate identically.  Returns observed
    mismatches (expected empty).
    """
    forbidden = set()
    for d in data.divisors:
        forbidden |= {p.finite for p in d.support()}
    mismatches = []
    counter = 0
    checked = 0
    while checked < n_points and counter < 10000 * max(n_points, 1):
        ca = charts[_mix_index(seed, counter, len(charts))]
        cb = charts[_mix_index(seed, counter + 1, len(charts))]
        exps = [
            int(_hash_rational(seed, counter + 2 + t) * 4) % 3 for t in range(3)
        ]
        counter += 8
        m = tuple(
            sum(exps[t] * ca.duals[t][c] for t in range(3)) for c in range(3)
        )
        rays_b = [data.fan.rays[rho] for rho in cb.cone]
        weights = [sum(m[c] * ray[c] for c in range(3)) for ray in rays_b]
        if any(w < 0 for w in weights):
            continue  # m is not regular on the second chart
        point = _hash_rational(seed, counter)
        counter += 1
        if point in forbidden:
            continue
        value_a = Fraction(1)
        for t in range(3):
            if exps[t]:
                va = evaluate_with_derivative(ca.coords[t], CurvePoint(point))
                value_a *= va[0] ** exps[t]
        value_b = Fraction(1)
        for t in range(3):
            if weights[t]:
                vb = evaluate_with_derivative(cb.coords[t], CurvePoint(point))
                value_b *= vb[0] ** weights[t]
        if value_a != value_b:
            mismatches.append((ca.cone, cb.cone, m, point, value_a, value_b))
        checked += 1
    return mismatches


def _mix_index(seed: int, counter: int, n: int) -> int:
    h = _hash_rational(seed ^ 0x5BF03635, counter)
    return (h.numerator + 120 * h.denominator) % n


def _fraction_str(x: Fraction) -> str:
    return str(Fraction(x))


def _parse_fraction(s) -> Fraction:
    if not isinstance(s, str):
        raise BadEmbeddingFile(f"expected a rational string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise BadEmbeddingFile(f"bad rational {s!r}") from exc


def _divisor_to_list(d: CDivisor) -> list:
    return [[_fraction_str(p.finite), m] for p, m in d.entries]


def _divisor_from_list(items) -> CDivisor:
    if not isinstance(items, list):
        raise BadEmbeddingFile("divisor must be an array")
    entries = []
    for item in items:
        if not isinstance(item, list) or len(item) != 2 or not isinstance(item[1], int):
            raise BadEmbeddingFile(f"bad divisor entry {item!r}")
        entries.append((CurvePoint(_parse_fraction(item[0])), item[1]))
    return CDivisor(tuple(entries))


def _function_to_dict(f: RationalFunction) -> dict:
    return {
        "constant": _fraction_str(f.constant),
        "factors": [[_fraction_str(r), e] for r, e in f.factors],
    }


def _function_from_dict(doc) -> RationalFunction:
    if not isinstance(doc, dict) or set(doc) != {"constant", "factors"}:
        raise BadEmbeddingFile(f"bad function object {doc!r}")
    factors = []
    for item in doc["factors"]:
        if not isinstance(item, list) or len(item) != 2 or not isinstance(item[1], int):
            raise BadEmbeddingFile(f"bad factor entry {item!r}")
        factors.append((_parse_fraction(item[0]), item[1]))
    return RationalFunction(_parse_fraction(doc["constant"]), tuple(factors))


def embedding_to_dict(data: EmbeddingData) -> dict:
    return {
        "fan": fan_to_dict(data.fan),
        "ample": list(data.ample.coeffs) if data.ample is not None else None,
        "xi": {"values": list(data.xi.values), "method": data.xi.method},
        "divisors": [_divisor_to_list(d) for d in data.divisors],
        "epsilon": [_function_to_dict(f) for f in data.epsilon],
        "torus": [_fraction_str(x) for x in data.torus],
    }


def embedding_from_dict(doc) -> EmbeddingData:
    if not isinstance(doc, dict):
        raise BadEmbeddingFile("embedding document must be an object")
    required = {"fan", "ample", "xi", "divisors", "epsilon", "torus"}
    if set(doc) != required:
        raise BadEmbeddingFile(
            f"fields must be exactly {sorted(required)}, got {sorted(doc)}"
        )
    fan = fan_from_dict(doc["fan"])
    ample = None
    if doc["ample"] is not None:
        if not isinstance(doc["ample"], list) or not all(
            isinstance(x, int) for x in doc["ample"]
        ):
            raise BadEmbeddingFile("ample must be an int array or null")
        ample = TDivisor(tuple(doc["ample"]))
    xi_doc = doc["xi"]
    if (
        not isinstance(xi_doc, dict)
        or set(xi_doc) != {"values", "method"}
        or not all(isinstance(v, int) for v in xi_doc["values"])
    ):
        raise BadEmbeddingFile("bad xi object")
    xi = XiVector(tuple(xi_doc["values"]), xi_doc["method"])
    divisors = tuple(_divisor_from_list(d) for d in doc["divisors"])
    epsilon = tuple(_function_from_dict(f) for f in doc["epsilon"])
    if len(epsilon) != 3:
        raise BadEmbeddingFile("exactly three character functions expected")
    torus = tuple(_parse_fraction(x) for x in doc["torus"])
    if len(torus) != 3:
        raise BadEmbeddingFile("torus must have three entries")
    return EmbeddingData(fan, ample, xi, divisors, epsilon, torus)


def dumps_embedding(data: EmbeddingData) -> str:
    return json.dumps(embedding_to_dict(data), indent=2) + "\n"


def loads_embedding(text: str) -> EmbeddingData:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadEmbeddingFile(f"not valid JSON: {exc}") from exc
    return embedding_from_dict(doc)


def save_embedding(data: EmbeddingData, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_embedding(data))


def load_embedding(path) -> EmbeddingData:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_embedding(fh.read())
