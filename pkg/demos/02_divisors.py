"""
Divisors: intersection numbers, ampleness, degree vectors, a fan with no
ample divisor at all.

Run with:  python3 demos/02_divisors.py
"""

from toricurve.fan import Fan, preset, validate, walls
from toricurve.feasibility import verify_infeasibility_certificate
from toricurve.intersect import (
    NotProjective,
    TDivisor,
    find_ample,
    is_ample,
    triple_product,
    wall_curve_degree,
    xi_vector,
)


def banner(title):
    print()
    print("=" * 64)
    print(title)
    print("=" * 64)


banner("1. Triple intersection numbers on p3")
fan = preset("p3")
h = TDivisor((0, 0, 0, 1))
print(f"H.H.H = {triple_product(fan, h, h, h)}   (a line meets a hyperplane once)")
v0 = TDivisor((1, 0, 0, 0))
print(f"V0.V0.V0 = {triple_product(fan, v0, v0, v0)}   (all ray divisors are hyperplanes)")

banner("2. The exceptional divisor of the blow-up cubes to 1")
blowup = preset("bl-p3-point")
e = TDivisor((0, 0, 0, 0, 1))
print(f"E.E.E = {triple_product(blowup, e, e, e)}")

banner("3. Wall curve degrees decide ampleness")
fan = preset("p1p1p1")
anticanonical = TDivisor((1, 1, 1, 1, 1, 1))
degrees = [wall_curve_degree(fan, w, anticanonical) for w in walls(fan)]
print(f"degrees of -K against all {len(degrees)} wall curves: {degrees}")
print(f"is_ample(-K) = {is_ample(fan, anticanonical)}")
factor = TDivisor((1, 0, 0, 0, 0, 0))
print(f"is_ample(V(e1)) = {is_ample(fan, factor)}   (nef but contracts a factor)")

banner("4. Deterministic ample search")
for name in ("p3", "p1p1p1", "bl-p3-point"):
    print(f"{name:12s} find_ample -> {find_ample(preset(name)).coeffs}")

banner("5. Degree vectors, two independent ways")
for name in ("p3", "p1p1p1", "bl-p3-point"):
    fan = preset(name)
    ample = find_ample(fan)
    by_intersection = xi_vector(fan, ample, method="intersection")
    by_kernel = xi_vector(fan, None, method="kernel")
    print(f"{name:12s} intersection={by_intersection.values} kernel={by_kernel.values}")
    # both sit in the kernel of the ray matrix, entrywise positive
    for xi in (by_intersection, by_kernel):
        assert all(v > 0 for v in xi.values)
        assert all(
            sum(v * ray[c] for v, ray in zip(xi.values, fan.rays)) == 0
            for c in range(3)
        )

banner("6. A smooth complete fan that is not projective")
# twisted subdivision of the p3 fan: each boundary quad is split by a
# rotationally consistent diagonal, which kills every ample divisor
twisted = Fan(
    rays=(
        (1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1),
        (0, -1, -1), (-1, 0, -1), (-1, -1, 0),
    ),
    max_cones=(
        (0, 1, 2), (3, 4, 5), (1, 4, 5), (0, 1, 4), (3, 5, 6),
        (2, 5, 6), (1, 2, 5), (3, 4, 6), (0, 4, 6), (0, 2, 6),
    ),
    name="twisted-prism",
)
report = validate(twisted)
print(f"smooth={report.smooth} complete={report.complete} counts={report.counts}")
try:
    find_ample(twisted)
except NotProjective as exc:
    print(f"find_ample: {exc}")
    n_vars = len(exc.constraints[0][0])
    ok = verify_infeasibility_certificate(exc.constraints, exc.certificate, n_vars)
    print(f"Farkas certificate rows: {dict(exc.certificate)}")
    print(f"certificate re-checked in exact arithmetic: {ok}")
