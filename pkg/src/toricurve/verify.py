"""Exact certification that embedding data is a closed immersion.

Per chart, injectivity is decided on pairs: the antisymmetric numerators
N_i(s, u) = F_i(s) G_i(u) - F_i(u) G_i(s) are divided by (s - u), a common
factor of the quotients is dispatched by factoring, and the residual finite
system is decided by pairwise resultants with a Groebner saturation
fallback.  Immersivity is a univariate gcd of derivative numerators plus a
separate derivative check at infinity.  Every rational witness is re-checked
by direct Fraction evaluation; algebraic witnesses are re-checked by
polynomial congruences.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import sympy

from .curve import (
    CDivisor,
    CurvePoint,
    INFINITY,
    RationalFunction,
    evaluate_with_derivative,
    _hash_rational,
)
from .embed import ChartMap, EmbeddingData, chart_maps, check_theorem_conditions

_T, _S, _U, _Y = sympy.symbols("t s u y")

DEFAULT_DEGREE_CAP = 512


class DegreeOverflow(RuntimeError):
    """A polynomial elimination step would exceed the degree cap."""

    def __init__(self, cone, estimate: int, cap: int):
        super().__init__(
            f"chart {cone}: elimination degree estimate {estimate} exceeds cap {cap}"
        )
        self.cone = cone
        self.estimate = estimate
        self.cap = cap


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    method: str
    witnesses: tuple = ()


@dataclass(frozen=True)
class ChartRecord:
    cone: tuple[int, int, int]
    injective: bool
    immersive: bool
    injectivity_method: str
    witnesses: tuple = ()


@dataclass(frozen=True)
class Certificate:
    charts: tuple[ChartRecord, ...]
    pullback_ok: bool
    pullback_witnesses: tuple
    embedded: bool

    @property
    def verdict_vector(self) -> tuple:
        return tuple(
            (r.cone, r.injective, r.immersive) for r in self.charts
        ) + (("pullback", self.pullback_ok),)


def _rat(x: Fraction):
    return sympy.Rational(x.numerator, x.denominator)


def _to_fraction(x) -> Fraction:
    return Fraction(int(sympy.numer(x)), int(sympy.denom(x)))


def _num_den(f: RationalFunction, var):
    """Numerator and denominator polynomials of a factored function."""
    num = _rat(f.constant)
    den = sympy.Integer(1)
    for r, e in f.factors:
        if e > 0:
            num *= (var - _rat(r)) ** e
        else:
            den *= (var - _rat(r)) ** (-e)
    return sympy.expand(num), sympy.expand(den)


def _value_at(f: RationalFunction, point: CurvePoint):
    got = evaluate_with_derivative(f, point)
    if not isinstance(got, tuple):
        return None  # pole
    return got[0]


def _rational_candidates(limit: int = 60):
    yield Fraction(0)
    for k in range(1, limit):
        yield Fraction(k)
        yield Fraction(-k)
    for k in range(1, limit):
        yield Fraction(2 * k - 1, 2)
        yield Fraction(-(2 * k - 1), 2)


def _is_diagonal(factor) -> bool:
    q = sympy.simplify(factor / (_S - _U))
    return q.is_number


def _axis_root(factor, var):
    """If factor is linear in `var` alone, its rational root, else None."""
    poly = sympy.Poly(factor, _S, _U)
    other = _U if var is _S else _S
    if sympy.degree(poly, other) != 0 or sympy.degree(poly, var) != 1:
        return None
    uni = sympy.Poly(factor, var)
    a, b = uni.all_coeffs()
    return _to_fraction(sympy.Rational(-b, a))


def _collision_holds(coords, s0: Fraction, u0: Fraction) -> bool:
    """Direct Fraction re-check, independent of the elimination machinery."""
    ps, pu = CurvePoint(s0), CurvePoint(u0)
    for f in coords:
        vs = evaluate_with_derivative(f, ps)
        vu = evaluate_with_derivative(f, pu)
        if vs is None or vu is None or not isinstance(vs, tuple) or not isinstance(vu, tuple):
            return False
        if vs[0] != vu[0]:
            return False
    return True


def _congruence_collision(pairs, s0: Fraction, mu) -> bool:
    """Check p_i(s0) = p_i(alpha) for every root alpha of mu, exactly.

    The identity F_i(u) G_i(s0) - F_i(s0) G_i(u) = 0 mod mu(u) states the
    collision in Q[u]/(mu).
    """
    for F, G in pairs:
        fs0 = F.subs(_S, _rat(s0)) if F.has(_S) else F
        gs0 = G.subs(_S, _rat(s0)) if G.has(_S) else G
        fu = F.subs(_S, _U) if F.has(_S) else F
        gu = G.subs(_S, _U) if G.has(_S) else G
        h = sympy.expand(fu * gs0 - fs0 * gu)
        if sympy.rem(h, mu, _U) != 0:
            return False
    return True


def _witness_from_curve(coords, FG, factor, excluded_fr):
    """A verified collision witness on the zero curve of a common factor."""
    for s0 in _rational_candidates():
        if s0 in excluded_fr:
            continue
        psi = sympy.expand(factor.subs(_S, _rat(s0)))
        if psi == 0:
            # factor is s - s0 itself; any u pairs with s0
            for u0 in _rational_candidates():
                if u0 != s0 and u0 not in excluded_fr and _collision_holds(coords, s0, u0):
                    return _pair_witness(s0, u0)
            continue
        poly = sympy.Poly(psi, _U)
        if poly.degree() < 1:
            continue
        for root, _mult in sorted(poly.ground_roots().items(), key=str):
            u0 = _to_fraction(root)
            if u0 == s0 or u0 in excluded_fr:
                continue
            if _collision_holds(coords, s0, u0):
                return _pair_witness(s0, u0)
        for mu, _mult in sorted(sympy.factor_list(psi, _U)[1], key=str):
            if sympy.degree(mu, _U) >= 2 and _congruence_collision(FG, s0, mu):
                return {
                    "kind": "collision-conjugate",
                    "s": str(s0),
                    "partner_poly": str(sympy.expand(mu)),
                    "verified": "congruence",
                }
    return {
        "kind": "collision-curve",
        "poly": str(sympy.expand(factor)),
        "verified": "common-factor-division",
    }


def _pair_witness(s0: Fraction, u0: Fraction) -> dict:
    a, b = sorted((s0, u0))
    return {
        "kind": "collision-pair",
        "s": str(a),
        "u": str(b),
        "verified": "evaluation",
    }


def _partner_witnesses(coords, FG, Qs, u0: Fraction, excluded_fr):
    """All verified collisions with second coordinate u0 (rational)."""
    if u0 in excluded_fr:
        return []
    specialized = []
    for q in Qs:
        spec = sympy.expand(q.subs(_U, _rat(u0)))
        if spec != 0:
            specialized.append(spec)
    assert specialized, "all coordinates degenerate at a candidate"
    d = specialized[0]
    for other in specialized[1:]:
        d = sympy.gcd(d, other)
    if sympy.degree(d, _S) < 1:
        return []
    out = []
    poly = sympy.Poly(d, _S)
    for root, _mult in sorted(poly.ground_roots().items(), key=str):
        s0 = _to_fraction(root)
        if s0 == u0 or s0 in excluded_fr:
            continue
        if _collision_holds(coords, s0, u0):
            out.append(_pair_witness(s0, u0))
    for mu, _mult in sorted(sympy.factor_list(d, _S)[1], key=str):
        if sympy.degree(mu, _S) >= 2:
            mu_u = mu.subs(_S, _U)
            if _congruence_collision(FG, u0, mu_u):
                out.append(
                    {
                        "kind": "collision-conjugate",
                        "s": str(u0),
                        "partner_poly": str(sympy.expand(mu)),
                        "verified": "congruence",
                    }
                )
    return out


def _saturation_poly(excluded_fr):
    h = _S - _U
    for e in sorted(excluded_fr):
        h *= (_S - _rat(e)) * (_U - _rat(e))
    return sympy.expand(h)


def chart_injective(chart: ChartMap, degree_cap: int = DEFAULT_DEGREE_CAP) -> CheckResult:
    """Decide injectivity of the chart coordinates off the excluded points."""
    coords = chart.coords
    excluded_fr = {p.finite for p in chart.excluded if not p.is_infinity}
    FG = []
    degs = []
    for f in coords:
        num, den = _num_den(f, _S)
        FG.append((num, den))
        degs.append(max(int(sympy.degree(num, _S)), int(sympy.degree(den, _S))))
    est0 = max(
        2 * degs[i] * degs[j] for i in range(3) for j in range(i + 1, 3)
    )
    if est0 > degree_cap:
        raise DegreeOverflow(chart.cone, est0, degree_cap)

    witnesses: list[dict] = []

    # collisions with the point at infinity: p_i(u) = p_i(inf) for all i.
    # Skipped when infinity is off the domain (a pole or excluded point).
    inf_values = [_value_at(f, INFINITY) for f in coords]
    infinity_in_domain = (
        all(c is not None for c in inf_values)
        and not any(p.is_infinity for p in chart.excluded)
    )
    if infinity_in_domain:
        h_polys = []
        for (num, den), c in zip(FG, inf_values):
            h = sympy.expand(num.subs(_S, _U) - _rat(c) * den.subs(_S, _U))
            assert h != 0, "a chart coordinate is constant"
            h_polys.append(h)
        g_inf = h_polys[0]
        for h in h_polys[1:]:
            g_inf = sympy.gcd(g_inf, h)
        if sympy.degree(g_inf, _U) >= 1:
            poly = sympy.Poly(g_inf, _U)
            for root, _mult in sorted(poly.ground_roots().items(), key=str):
                u0 = _to_fraction(root)
                if u0 in excluded_fr:
                    continue
                values = [evaluate_with_derivative(f, CurvePoint(u0)) for f in coords]
                if all(
                    isinstance(v, tuple) and v[0] == c
                    for v, c in zip(values, inf_values)
                ):
                    witnesses.append(
                        {
                            "kind": "collision-with-infinity",
                            "u": str(u0),
                            "verified": "evaluation",
                        }
                    )
            for mu, _mult in sorted(sympy.factor_list(g_inf, _U)[1], key=str):
                if sympy.degree(mu, _U) >= 2:
                    if all(sympy.rem(h, mu, _U) == 0 for h in h_polys):
                        witnesses.append(
                            {
                                "kind": "collision-with-infinity-conjugate",
                                "poly": str(sympy.expand(mu)),
                                "verified": "congruence",
                            }
                        )

    # finite-finite collisions
    Qs = []
    all_linearish = True
    for num, den in FG:
        n_expr = sympy.expand(
            num * den.subs(_S, _U) - num.subs(_S, _U) * den
        )
        q = sympy.exquo(n_expr, _S - _U)  # antisymmetric, always divisible
        q = sympy.expand(q)
        assert q != 0, "a chart coordinate is constant"
        Qs.append(q)
        if not q.is_number:
            all_linearish = False

    method = "linear"
    if not all_linearish:
        if any(q.is_number for q in Qs):
            method = "resultant"  # some coordinate separates every pair
        else:
            method = _finite_finite(
                chart, coords, FG, Qs, excluded_fr, witnesses, degree_cap
            )

    witnesses.sort(key=lambda w: json.dumps(w, sort_keys=True))
    return CheckResult(not witnesses, method, tuple(witnesses))


def _finite_finite(chart, coords, FG, Qs, excluded_fr, witnesses, degree_cap):
    """Dispatch shared factors, then decide the residual system."""
    def deg(expr, var):
        return int(sympy.degree(expr, var))

    est = max(
        deg(Qs[i], _S) * deg(Qs[j], _U) + deg(Qs[j], _S) * deg(Qs[i], _U)
        for i in range(3)
        for j in range(i + 1, 3)
    )
    if est > degree_cap:
        raise DegreeOverflow(chart.cone, est, degree_cap)

    g = sympy.gcd(sympy.gcd(Qs[0], Qs[1]), Qs[2])
    residual = list(Qs)
    if not g.is_number:
        _coeff, factors = sympy.factor_list(g, _S, _U)
        for factor, _mult in sorted(factors, key=str):
            if _is_diagonal(factor):
                continue  # extra tangency along the diagonal: immersion's job
            root_s = _axis_root(factor, _S)
            if root_s is not None and root_s in excluded_fr:
                continue
            root_u = _axis_root(factor, _U)
            if root_u is not None and root_u in excluded_fr:
                continue
            witnesses.append(_witness_from_curve(coords, FG, factor, excluded_fr))
        residual = [sympy.expand(sympy.exquo(q, g)) for q in Qs]

    if any(r.is_number for r in residual):
        return "factor" if not g.is_number else "resultant"

    # quick passes: a constant candidate gcd in either direction proves the
    # residual system has no common zeros at all
    du = None
    for elim_var, keep_var in ((_S, _U), (_U, _S)):
        cands = _candidate_polys(residual, elim_var, keep_var, chart.cone, degree_cap)
        if cands is _EMPTY:
            return "resultant"
        if cands is None:
            continue
        d = cands[0]
        for c in cands[1:]:
            if d.is_number:
                break
            d = sympy.gcd(d, c)
        if d.is_number:
            return "resultant"
        if keep_var is _U:
            du = d

    # candidate roots in the u direction, partners recovered by univariate gcd
    hard = False
    if du is not None:
        _coeff, factors = sympy.factor_list(du, _U)
        found = len(witnesses)
        for mu, _mult in sorted(factors, key=str):
            if sympy.degree(mu, _U) == 1:
                poly = sympy.Poly(mu, _U)
                a, b = poly.all_coeffs()
                u0 = _to_fraction(sympy.Rational(-b, a))
                witnesses.extend(
                    _partner_witnesses(coords, FG, residual, u0, excluded_fr)
                )
            else:
                hard = True
        if witnesses[found:]:
            return "resultant"
        if not hard:
            return "resultant"  # every candidate dispatched, none in range

    # Groebner saturation decides the rest exactly
    bezout = 1
    for r in residual:
        bezout *= max(1, sympy.Poly(r, _S, _U).total_degree())
    if bezout > degree_cap:
        raise DegreeOverflow(chart.cone, bezout, degree_cap)
    sat = _saturation_poly(excluded_fr)
    gb = sympy.groebner(
        residual + [1 - _Y * sat], _Y, _S, _U, order="lex"
    )
    if list(gb.exprs) == [sympy.Integer(1)]:
        return "groebner"
    elim_u = [e for e in gb.exprs if not e.has(_Y) and not e.has(_S)]
    assert elim_u, "saturated zero-dimensional ideal has a univariate member"
    _coeff, factors = sympy.factor_list(elim_u[0], _U)
    found = len(witnesses)
    for mu, _mult in sorted(factors, key=str):
        if sympy.degree(mu, _U) == 1:
            poly = sympy.Poly(mu, _U)
            a, b = poly.all_coeffs()
            u0 = _to_fraction(sympy.Rational(-b, a))
            witnesses.extend(
                _partner_witnesses(coords, FG, residual, u0, excluded_fr)
            )
    if not witnesses[found:]:
        witnesses.append(
            {
                "kind": "collision-system",
                "elimination_poly": str(sympy.expand(elim_u[0])),
                "verified": "groebner-saturation",
            }
        )
    return "groebner"


_EMPTY = object()  # sentinel: the system certainly has no common zeros


def _candidate_polys(residual, elim_var, keep_var, cone, degree_cap):
    """Polynomials in keep_var that vanish at every residual common zero.

    Returns _EMPTY as soon as some pair's resultant is a nonzero constant
    (that pair alone already has no common zeros), None when no candidate
    source exists (every pairwise resultant vanishes identically).
    """
    def deg(expr, var):
        return int(sympy.degree(expr, var))

    cands = []
    positive = []
    for r in residual:
        if deg(r, elim_var) == 0:
            cands.append(r)  # already free of the eliminated variable
        else:
            positive.append(r)
    for i in range(len(positive)):
        for j in range(i + 1, len(positive)):
            f, g = positive[i], positive[j]
            est = deg(f, elim_var) * deg(g, keep_var) + deg(g, elim_var) * deg(
                f, keep_var
            )
            if est > degree_cap:
                raise DegreeOverflow(cone, est, degree_cap)
            res = sympy.expand(sympy.resultant(f, g, elim_var))
            if res.is_number:
                if res != 0:
                    return _EMPTY
            else:
                cands.append(res)
    return cands or None


def chart_immersive(chart: ChartMap) -> CheckResult:
    """No common zero of all coordinate derivatives on the chart domain."""
    coords = chart.coords
    excluded_fr = {p.finite for p in chart.excluded}
    witnesses: list[dict] = []

    w_polys = []
    for f in coords:
        num, den = _num_den(f, _T)
        w = sympy.expand(sympy.diff(num, _T) * den - num * sympy.diff(den, _T))
        assert w != 0, "a chart coordinate is constant"
        w_polys.append(w)
    g = w_polys[0]
    for w in w_polys[1:]:
        g = sympy.gcd(g, w)
    if sympy.degree(g, _T) >= 1:
        poly = sympy.Poly(g, _T)
        for root, _mult in sorted(poly.ground_roots().items(), key=str):
            t0 = _to_fraction(root)
            if t0 in excluded_fr:
                continue
            values = [evaluate_with_derivative(f, CurvePoint(t0)) for f in coords]
            if all(isinstance(v, tuple) and v[1] == 0 for v in values):
                witnesses.append(
                    {
                        "kind": "tangent-point",
                        "t": str(t0),
                        "verified": "evaluation",
                    }
                )
        for mu, _mult in sorted(sympy.factor_list(g, _T)[1], key=str):
            if sympy.degree(mu, _T) >= 2:
                if all(sympy.rem(w, mu, _T) == 0 for w in w_polys):
                    witnesses.append(
                        {
                            "kind": "tangent-conjugate",
                            "poly": str(sympy.expand(mu)),
                            "verified": "congruence",
                        }
                    )

    inf_derivs = [evaluate_with_derivative(f, INFINITY) for f in coords]
    if all(isinstance(v, tuple) and v[1] == 0 for v in inf_derivs):
        witnesses.append({"kind": "tangent-infinity", "verified": "evaluation"})

    witnesses.sort(key=lambda w: json.dumps(w, sort_keys=True))
    return CheckResult(not witnesses, "derivative-gcd", tuple(witnesses))


def pullback_check(data: EmbeddingData, charts) -> CheckResult:
    """Zero divisors of chart coordinates must be the sampled divisors, reduced."""
    witnesses: list[dict] = []
    for chart in charts:
        excluded = set(chart.excluded)
        for pos, rho in enumerate(chart.cone):
            f = chart.coords[pos]
            zeros = CDivisor.of(
                [
                    (CurvePoint(r), e)
                    for r, e in f.factors
                    if e > 0 and CurvePoint(r) not in excluded
                ]
            )
            expected = data.divisors[rho]
            if zeros != expected:
                diff = zeros + (-expected)
                witnesses.append(
                    {
                        "kind": "pullback-mismatch",
                        "cone": list(chart.cone),
                        "ray": rho,
                        "difference": [[str(p), m] for p, m in diff.entries],
                    }
                )
            elif not zeros.is_reduced:
                bad = [p for p, m in zeros.entries if m != 1]
                witnesses.append(
                    {
                        "kind": "pullback-not-reduced",
                        "cone": list(chart.cone),
                        "ray": rho,
                        "points": [str(p) for p in bad],
                    }
                )
    witnesses.sort(key=lambda w: json.dumps(w, sort_keys=True))
    return CheckResult(not witnesses, "exact-divisor", tuple(witnesses))


def certify(data: EmbeddingData, degree_cap: int = DEFAULT_DEGREE_CAP) -> Certificate:
    """Full certification across every chart plus the pullback check."""
    conditions = check_theorem_conditions(data)
    if not conditions.passed:
        raise ValueError(
            "morphism conditions fail; nothing to certify: "
            f"{conditions.disjointness_failures + conditions.divisor_failures}"
        )
    charts = chart_maps(data)
    records = []
    for chart in charts:
        inj = chart_injective(chart, degree_cap)
        imm = chart_immersive(chart)
        records.append(
            ChartRecord(
                cone=chart.cone,
                injective=inj.ok,
                immersive=imm.ok,
                injectivity_method=inj.method,
                witnesses=inj.witnesses + imm.witnesses,
            )
        )
    pull = pullback_check(data, charts)
    embedded = all(r.injective and r.immersive for r in records) and pull.ok
    return Certificate(tuple(records), pull.ok, pull.witnesses, embedded)


def certificate_to_dict(cert: Certificate) -> dict:
    return {
        "charts": [
            {
                "cone": list(r.cone),
                "injective": r.injective,
                "immersive": r.immersive,
                "injectivity_method": r.injectivity_method,
                "witnesses": [dict(w) for w in r.witnesses],
            }
            for r in cert.charts
        ],
        "pullback_ok": cert.pullback_ok,
        "pullback_witnesses": [dict(w) for w in cert.pullback_witnesses],
        "embedded": cert.embedded,
    }


def dumps_certificate(cert: Certificate) -> str:
    return json.dumps(certificate_to_dict(cert), indent=2, sort_keys=True) + "\n"


def save_certificate(cert: Certificate, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_certificate(cert))


def brute_force_pair_scan(data: EmbeddingData, charts, pairs_per_chart: int, seed: int):
    """Random pair sampling that must not find collisions a pass missed."""
    collisions = []
    for idx, chart in enumerate(charts):
        excluded = set(chart.excluded)
        stream_seed = seed * 1000003 + idx
        counter = 0
        done = 0
        while done < pairs_per_chart and counter < 100000:
            a = CurvePoint(_hash_rational(stream_seed, counter))
            b = CurvePoint(_hash_rational(stream_seed, counter + 1))
            counter += 2
            if a == b or a in excluded or b in excluded:
                continue
            done += 1
            same = True
            for f in chart.coords:
                va = evaluate_with_derivative(f, a)
                vb = evaluate_with_derivative(f, b)
                if va[0] != vb[0]:
                    same = False
                    break
            if same:
                collisions.append((chart.cone, a, b))
    return collisions
