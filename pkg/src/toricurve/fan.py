"""Complete simplicial fans in a rank-3 lattice.

A fan is a tuple of primitive ray generators plus maximal cones given as
index triples.  Everything downstream (walls, intersection numbers, ample
search) assumes smooth and complete; validate() decides both exactly.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from functools import lru_cache

from .feasibility import Infeasible, find_point
from .intlinalg import IntMatrix, unimodular_inverse

Vec3 = tuple[int, int, int]


class MalformedFan(ValueError):
    """Structurally invalid fan data: duplicate rays, bad indices, bad shapes."""


class NotComplete(ValueError):
    """An operation that needs a complete fan met one that is not."""


class ConeNotInFan(ValueError):
    """The requested cone is not a maximal cone of the fan."""


class UnknownPreset(ValueError):
    """No preset fan with that name."""


def _as_ray(value) -> Vec3:
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise MalformedFan(f"ray must be a triple of ints, got {value!r}")
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
        raise MalformedFan(f"ray entries must be ints, got {value!r}")
    return (value[0], value[1], value[2])


def is_primitive(ray: Vec3) -> bool:
    return ray != (0, 0, 0) and math.gcd(*[abs(x) for x in ray]) == 1


@dataclass(frozen=True)
class Fan:
    """Rays plus maximal cones (sorted index triples)."""

    rays: tuple[Vec3, ...]
    max_cones: tuple[tuple[int, int, int], ...]
    name: str = ""

    def __post_init__(self) -> None:
        rays = tuple(_as_ray(r) for r in self.rays)
        if len(set(rays)) != len(rays):
            raise MalformedFan("duplicate rays")
        cones = []
        for cone in self.max_cones:
            if not isinstance(cone, (list, tuple)) or len(cone) != 3:
                raise MalformedFan(f"cone must be an index triple, got {cone!r}")
            if not all(isinstance(i, int) and not isinstance(i, bool) for i in cone):
                raise MalformedFan(f"cone indices must be ints, got {cone!r}")
            if any(not 0 <= i < len(rays) for i in cone):
                raise MalformedFan(f"cone index out of range: {cone!r}")
            if len(set(cone)) != 3:
                raise MalformedFan(f"cone repeats a ray: {cone!r}")
            cones.append(tuple(sorted(cone)))
        if len(set(cones)) != len(cones):
            raise MalformedFan("duplicate maximal cones")
        if not isinstance(self.name, str):
            raise MalformedFan("name must be a string")
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", tuple(cones))

    @property
    def n_rays(self) -> int:
        return len(self.rays)


def ray_matrix(fan: Fan) -> IntMatrix:
    """3 x r matrix whose columns are the ray generators."""
    return IntMatrix.from_rows(
        [[ray[i] for ray in fan.rays] for i in range(3)]
    )


def cone_matrix(fan: Fan, cone: tuple[int, int, int]) -> IntMatrix:
    """3 x 3 matrix whose columns are the cone's rays, in index order."""
    return IntMatrix.from_rows(
        [[fan.rays[j][i] for j in cone] for i in range(3)]
    )


@dataclass(frozen=True)
class ValidationReport:
    smooth: bool
    complete: bool
    counts: tuple[int, int, int]  # rays, 2-faces, maximal cones
    issues: tuple[tuple, ...] = ()

    @property
    def ok(self) -> bool:
        return self.smooth and self.complete


def _pair_census(fan: Fan) -> dict[tuple[int, int], list[int]]:
    census: dict[tuple[int, int], list[int]] = {}
    for idx, cone in enumerate(fan.max_cones):
        i, j, k = cone
        for pair in ((i, j), (i, k), (j, k)):
            census.setdefault(pair, []).append(idx)
    return census


def _cones_intersect_in_face(fan: Fan, ca, cb) -> bool:
    """Exact test that two maximal cones meet in a common face.

    There is a linear functional vanishing on the shared rays and strictly
    separating the rest iff the intersection is the face spanned by the
    shared rays.  Strictness is scale-invariant, so margin 1 is exact.
    """
    common = set(ca) & set(cb)
    constraints = []
    for idx in ca:
        ray = fan.rays[idx]
        if idx in common:
            constraints.append((ray, 0))
            constraints.append((tuple(-x for x in ray), 0))
        else:
            constraints.append((ray, 1))
    for idx in cb:
        if idx not in common:
            constraints.append((tuple(-x for x in fan.rays[idx]), 1))
    try:
        find_point(constraints, 3)
        return True
    except Infeasible:
        return False


def validate(fan: Fan) -> ValidationReport:
    """Smoothness and completeness, with exact criteria and issue codes."""
    issues: list[tuple] = []
    for idx, ray in enumerate(fan.rays):
        if not is_primitive(ray):
            issues.append(("non_primitive_ray", idx))
    for idx, cone in enumerate(fan.max_cones):
        if abs(cone_matrix(fan, cone).det()) != 1:
            issues.append(("cone_not_unimodular", idx))
    smooth = not issues

    census = _pair_census(fan)
    complete = bool(fan.max_cones)
    if not fan.max_cones:
        issues.append(("no_cones",))
    for pair, owners in sorted(census.items()):
        if len(owners) != 2:
            complete = False
            issues.append(("open_wall", pair, len(owners)))
    for a in range(len(fan.max_cones)):
        for b in range(a + 1, len(fan.max_cones)):
            if not _cones_intersect_in_face(fan, fan.max_cones[a], fan.max_cones[b]):
                complete = False
                issues.append(("bad_cone_intersection", a, b))
    counts = (len(fan.rays), len(census), len(fan.max_cones))
    return ValidationReport(smooth, complete, counts, tuple(issues))


@dataclass(frozen=True)
class Wall:
    """A 2-face <n_i, n_j> with its two adjacent maximal cones.

    The opposite rays n_k (of cone_a) and n_l (of cone_b) satisfy the exact
    relation n_k + n_l + a*n_i + b*n_j = 0.
    """

    i: int
    j: int
    cone_a: tuple[int, int, int]
    cone_b: tuple[int, int, int]
    third_a: int
    third_b: int
    a: int
    b: int


@lru_cache(maxsize=None)
def walls(fan: Fan) -> tuple[Wall, ...]:
    """All 2-faces with adjacency and wall relation coefficients."""
    census = _pair_census(fan)
    out = []
    for pair, owners in sorted(census.items()):
        if len(owners) != 2:
            raise NotComplete(f"wall {pair} has {len(owners)} adjacent cones")
        i, j = pair
        ca = fan.max_cones[owners[0]]
        cb = fan.max_cones[owners[1]]
        k = next(x for x in ca if x not in pair)
        l = next(x for x in cb if x not in pair)
        # coordinates of n_l in the basis (n_i, n_j, n_k)
        basis = IntMatrix.from_rows(
            [[fan.rays[j2][i2] for j2 in (i, j, k)] for i2 in range(3)]
        )
        alpha, beta, gamma = unimodular_inverse(basis).mul_vector(fan.rays[l])
        if gamma != -1:
            raise MalformedFan(
                f"cones at wall {pair} do not lie on opposite sides"
            )
        a, b = -alpha, -beta
        ni, nj = fan.rays[i], fan.rays[j]
        nk, nl = fan.rays[k], fan.rays[l]
        assert all(
            nk[t] + nl[t] + a * ni[t] + b * nj[t] == 0 for t in range(3)
        )
        out.append(Wall(i, j, ca, cb, k, l, a, b))
    return tuple(out)


@lru_cache(maxsize=None)
def _cone_set(fan: Fan) -> frozenset:
    return frozenset(fan.max_cones)


@lru_cache(maxsize=None)
def _face_pairs(fan: Fan) -> frozenset:
    return frozenset(_pair_census(fan))


def primitive_collections(fan: Fan) -> tuple[tuple[int, ...], ...]:
    """Minimal sets of rays that span no cone (sizes 2 to 4).

    Faces have at most 3 rays, so any 4-set is a non-face; minimality caps
    the search at size 4.
    """
    cones = _cone_set(fan)
    pairs = _face_pairs(fan)
    n = fan.n_rays
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in pairs:
                out.append((i, j))
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in pairs:
                continue
            for k in range(j + 1, n):
                if (i, k) in pairs and (j, k) in pairs and (i, j, k) not in cones:
                    out.append((i, j, k))
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for l in range(k + 1, n):
                    triples = ((i, j, k), (i, j, l), (i, k, l), (j, k, l))
                    if all(t in cones for t in triples):
                        out.append((i, j, k, l))
    return tuple(sorted(out, key=lambda c: (len(c), c)))


def star_subdivision(fan: Fan, cone) -> Fan:
    """Insert the ray sum of a maximal cone and fan out its three facets."""
    target = tuple(sorted(cone))
    if len(target) != 3 or target not in _cone_set(fan):
        raise ConeNotInFan(f"{cone!r} is not a maximal cone of the fan")
    i, j, k = target
    new_ray = tuple(
        fan.rays[i][t] + fan.rays[j][t] + fan.rays[k][t] for t in range(3)
    )
    new_idx = fan.n_rays
    cones = [c for c in fan.max_cones if c != target]
    cones.extend([(i, j, new_idx), (i, k, new_idx), (j, k, new_idx)])
    return Fan(fan.rays + (new_ray,), tuple(cones), fan.name)


def preset(name: str) -> Fan:
    """Built-in fans: p3, p1p1p1 and bl-p3-point."""
    if name == "p3":
        return Fan(
            rays=((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)),
            max_cones=((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)),
            name="p3",
        )
    if name == "p1p1p1":
        rays = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))
        cones = tuple(
            (i, j, k) for i in (0, 1) for j in (2, 3) for k in (4, 5)
        )
        return Fan(rays=rays, max_cones=cones, name="p1p1p1")
    if name == "bl-p3-point":
        fan = star_subdivision(preset("p3"), (0, 1, 2))
        return replace(fan, name="bl-p3-point")
    raise UnknownPreset(f"unknown preset {name!r}")


def fan_to_dict(fan: Fan) -> dict:
    return {
        "name": fan.name,
        "rays": [list(r) for r in fan.rays],
        "cones": [list(c) for c in fan.max_cones],
    }


def fan_from_dict(doc) -> Fan:
    if not isinstance(doc, dict):
        raise MalformedFan("fan document must be an object")
    required = {"name", "rays", "cones"}
    keys = set(doc)
    if keys - required:
        raise MalformedFan(f"unknown fields: {sorted(keys - required)}")
    if required - keys:
        raise MalformedFan(f"missing fields: {sorted(required - keys)}")
    if not isinstance(doc["rays"], list) or not isinstance(doc["cones"], list):
        raise MalformedFan("rays and cones must be arrays")
    return Fan(
        rays=tuple(_as_ray(r) for r in doc["rays"]),
        max_cones=tuple(
            tuple(c) if isinstance(c, list) else c for c in doc["cones"]
        ),
        name=doc["name"],
    )


def dumps_fan(fan: Fan) -> str:
    return json.dumps(fan_to_dict(fan), indent=2) + "\n"


def loads_fan(text: str) -> Fan:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFan(f"not valid JSON: {exc}") from exc
    return fan_from_dict(doc)


def save_fan(fan: Fan, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_fan(fan))


def load_fan(path) -> Fan:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_fan(fh.read())
