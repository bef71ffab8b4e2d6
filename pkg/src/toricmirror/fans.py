"""Smooth complete toric fans, wall curves and curve-class bookkeeping.

The input format is a small JSON document::

    {"dim": 2,
     "rays": [[1, 0], [0, 1], [-1, -1]],
     "max_cones": [[0, 1], [1, 2], [2, 0]],
     "labels": ["D1", "D2", "D3"],          # optional
     "basis_cone": [0, 1]}                  # optional

All numbers must be integers (floats are rejected, including "1.0" in JSON).
Ray indices are 0-based everywhere in the public interface.

:func:`validate` performs the structural checks (primitive rays, unimodular
maximal cones, every facet shared by exactly two cones, connected dual graph,
projectivity) and returns a :class:`ToricContext` holding the derived linear
algebra: the dual basis of the chosen smooth cone, the ray/curve pairing
matrix, the anticanonical degrees, wall curve classes and an exact rational
grading weight that is >= 1 on every wall curve.

Curve classes are written in the basis dual to the rays outside the basis
cone, so a class is just an integer vector of length ``m - dim``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import lp


class FanError(ValueError):
    """Raised when a fan document is malformed or fails validation."""


@dataclass(frozen=True)
class CurveClass:
    """An integer homology class expressed in the curve basis of a context."""

    comps: tuple

    def __post_init__(self):
        object.__setattr__(self, "comps", tuple(int(c) for c in self.comps))

    def __add__(self, other):
        return CurveClass(tuple(a + b for a, b in zip(self.comps, other.comps)))

    def scale(self, k: int) -> "CurveClass":
        return CurveClass(tuple(k * c for c in self.comps))

    def is_zero(self) -> bool:
        return not any(self.comps)


@dataclass(frozen=True)
class DiscClass:
    """A basic disc class attached to ``ray`` plus a sphere correction."""

    ray: int
    curve: CurveClass


@dataclass(frozen=True)
class Wall:
    """An interior codimension-one cone with its primitive curve class.

    ``rays`` are the original indices spanning the wall, ``cones`` the two
    maximal cones meeting along it, ``pairings`` the intersection numbers of
    the wall curve with every toric divisor (original ray order).
    """

    rays: tuple
    cones: tuple
    curve: CurveClass
    pairings: tuple


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple
    max_cones: tuple
    labels: tuple | None = None
    basis_cone: tuple | None = None

    def to_dict(self) -> dict:
        doc = {
            "dim": self.dim,
            "rays": [list(r) for r in self.rays],
            "max_cones": [list(c) for c in self.max_cones],
        }
        if self.labels is not None:
            doc["labels"] = list(self.labels)
        if self.basis_cone is not None:
            doc["basis_cone"] = list(self.basis_cone)
        return doc


def _reject_float(text):
    raise FanError(f"fan documents must use integers only (saw {text!r})")


def _check_int(value, what):
    if isinstance(value, bool) or not isinstance(value, int):
        raise FanError(f"{what} must be an integer, got {value!r}")
    return value


def parse_fan(source) -> Fan:
    """Parse and structurally check a fan document (str, bytes or dict)."""
    if isinstance(source, (str, bytes)):
        try:
            doc = json.loads(source, parse_float=_reject_float)
        except FanError:
            raise
        except json.JSONDecodeError as exc:
            raise FanError(f"invalid JSON: {exc}") from exc
    elif isinstance(source, dict):
        doc = source
    else:
        raise FanError(f"cannot parse fan from {type(source).__name__}")
    if not isinstance(doc, dict):
        raise FanError("fan document must be a JSON object")

    for key in ("dim", "rays", "max_cones"):
        if key not in doc:
            raise FanError(f"fan document is missing required key {key!r}")

    dim = _check_int(doc["dim"], "dim")
    if dim < 1:
        raise FanError("dim must be at least 1")

    rays_doc = doc["rays"]
    if not isinstance(rays_doc, list) or not rays_doc:
        raise FanError("rays must be a non-empty list")
    rays = []
    for i, ray in enumerate(rays_doc):
        if not isinstance(ray, list) or len(ray) != dim:
            raise FanError(f"ray {i} must be a list of {dim} integers")
        vec = tuple(_check_int(x, f"ray {i} entry") for x in ray)
        g = 0
        for x in vec:
            g = gcd(g, abs(x))
        if g == 0:
            raise FanError(f"ray {i} is the zero vector")
        if g != 1:
            raise FanError(f"ray {i} is not primitive (gcd {g})")
        rays.append(vec)
    if len(set(rays)) != len(rays):
        raise FanError("duplicate rays are not allowed")

    cones_doc = doc["max_cones"]
    if not isinstance(cones_doc, list) or not cones_doc:
        raise FanError("max_cones must be a non-empty list")
    cones = []
    seen = set()
    for i, cone in enumerate(cones_doc):
        if not isinstance(cone, list):
            raise FanError(f"cone {i} must be a list of ray indices")
        idx = tuple(_check_int(x, f"cone {i} entry") for x in cone)
        for x in idx:
            if not 0 <= x < len(rays):
                raise FanError(f"cone {i} references ray {x}, out of range")
        if len(set(idx)) != len(idx):
            raise FanError(f"cone {i} repeats a ray")
        key = frozenset(idx)
        if key in seen:
            raise FanError(f"cone {i} duplicates an earlier cone")
        seen.add(key)
        cones.append(idx)

    labels = None
    if doc.get("labels") is not None:
        labels_doc = doc["labels"]
        if (not isinstance(labels_doc, list)
                or len(labels_doc) != len(rays)
                or not all(isinstance(s, str) for s in labels_doc)):
            raise FanError("labels must be a list of strings, one per ray")
        labels = tuple(labels_doc)

    basis_cone = None
    if doc.get("basis_cone") is not None:
        bc = doc["basis_cone"]
        if not isinstance(bc, list):
            raise FanError("basis_cone must be a list of ray indices")
        basis_cone = tuple(_check_int(x, "basis_cone entry") for x in bc)
        if frozenset(basis_cone) not in seen:
            raise FanError("basis_cone is not one of the maximal cones")

    return Fan(dim=dim, rays=tuple(rays), max_cones=tuple(cones),
               labels=labels, basis_cone=basis_cone)


def _det(rows) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    n = len(rows)
    m = [list(map(int, r)) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((r for r in range(k + 1, n) if m[r][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(eq=False)
class ToricContext:
    """Validated fan together with its curve-class linear algebra.

    ``basis_perm[i]`` is the original index of the i-th internal ray; the
    first ``n`` internal rays span the basis cone.  ``P[i][k]`` is the
    intersection number of the i-th internal divisor with the k-th basis
    curve class, ``c1`` the column sums (anticanonical degrees).
    """

    fan: Fan
    n: int
    m: int
    basis_perm: tuple
    inv_perm: tuple
    rays: tuple
    nu: tuple
    P: tuple
    c1: tuple
    ample_weight: tuple
    walls: tuple
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return self.m - self.n

    def pairing(self, ray: int, curve: CurveClass) -> int:
        """Intersection number of the divisor at original ray index ``ray``."""
        row = self.P[self.inv_perm[ray]]
        return sum(p * c for p, c in zip(row, curve.comps))

    def degree(self, curve: CurveClass) -> int:
        """Anticanonical degree ``c1 . curve``."""
        return sum(a * c for a, c in zip(self.c1, curve.comps))

    def weight(self, comps) -> Fraction:
        return sum((w * c for w, c in zip(self.ample_weight, comps)), Fraction(0))

    def label(self, ray: int) -> str:
        if self.fan.labels is not None:
            return self.fan.labels[ray]
        return f"D{ray}"


def _facets(cone):
    cone = tuple(cone)
    if len(cone) == 1:
        return [()]
    return [tuple(x for x in cone if x != drop) for drop in cone]


def validate(fan: Fan, basis_cone=None) -> ToricContext:
    """Check a fan and assemble its :class:`ToricContext`.

    Raises :class:`FanError` when the fan is not smooth, not complete (in the
    sense that some wall is not shared by exactly two cones or the dual graph
    is disconnected), or admits no strictly positive grading on its wall
    curves (non-projective).
    """
    if isinstance(fan, dict):
        fan = parse_fan(fan)
    n, m = fan.dim, len(fan.rays)

    used = set()
    for cone in fan.max_cones:
        used.update(cone)
    if used != set(range(m)):
        missing = sorted(set(range(m)) - used)
        raise FanError(f"rays {missing} appear in no maximal cone")

    for ci, cone in enumerate(fan.max_cones):
        if len(cone) != n:
            raise FanError(f"cone {ci} has {len(cone)} rays, expected {n}")
        d = _det([fan.rays[i] for i in cone])
        if abs(d) != 1:
            raise FanError(f"cone {ci} is not unimodular (determinant {d})")

    # Every facet of a maximal cone must be shared by exactly two of them and
    # the adjacency graph must be connected: together with unimodularity this
    # pins down a smooth complete fan.
    facet_map = {}
    for ci, cone in enumerate(fan.max_cones):
        for facet in _facets(cone):
            facet_map.setdefault(frozenset(facet), []).append(ci)
    adjacency = {ci: set() for ci in range(len(fan.max_cones))}
    for facet, owners in facet_map.items():
        if len(owners) != 2:
            raise FanError(
                f"wall {sorted(facet)} belongs to {len(owners)} maximal cones, expected 2")
        a, b = owners
        adjacency[a].add(b)
        adjacency[b].add(a)
    frontier = [0]
    reached = {0}
    while frontier:
        for nxt in adjacency[frontier.pop()]:
            if nxt not in reached:
                reached.add(nxt)
                frontier.append(nxt)
    if len(reached) != len(fan.max_cones):
        raise FanError("fan support is disconnected")

    if basis_cone is None:
        basis_cone = fan.basis_cone if fan.basis_cone is not None else fan.max_cones[0]
    basis = tuple(sorted(basis_cone))
    if frozenset(basis) not in {frozenset(c) for c in fan.max_cones}:
        raise FanError("basis cone is not a maximal cone of the fan")

    basis_perm = basis + tuple(i for i in range(m) if i not in set(basis))
    inv_perm = [0] * m
    for internal, orig in enumerate(basis_perm):
        inv_perm[orig] = internal
    rays_internal = tuple(fan.rays[i] for i in basis_perm)

    # Dual basis of the basis cone: nu[p] . rays_internal[q] == delta(p, q).
    # Unimodularity makes it integral.
    basis_matrix = [list(rays_internal[q]) for q in range(n)]
    nu = []
    for p in range(n):
        rhs = [1 if q == p else 0 for q in range(n)]
        sol = lp.solve_linear(basis_matrix, rhs)
        if sol is None:
            raise FanError("basis cone rays are linearly dependent")
        if any(x.denominator != 1 for x in sol):
            raise FanError("basis cone dual basis is not integral")
        nu.append(tuple(int(x) for x in sol))
    nu = tuple(nu)

    rank = m - n
    P = []
    for p in range(n):
        P.append(tuple(-sum(nu[p][j] * rays_internal[n + k][j] for j in range(n))
                       for k in range(rank)))
    for i in range(rank):
        P.append(tuple(1 if k == i else 0 for k in range(rank)))
    P = tuple(P)
    c1 = tuple(sum(P[i][k] for i in range(m)) for k in range(rank))

    walls = []
    for facet_key in sorted(facet_map, key=lambda f: tuple(sorted(f))):
        ca, cb = facet_map[facet_key]
        facet = tuple(sorted(facet_key))
        u = next(i for i in fan.max_cones[ca] if i not in facet_key)
        u2 = next(i for i in fan.max_cones[cb] if i not in facet_key)
        # Write the opposite ray in the basis {u} + facet of the first cone;
        # for a genuine fan the u-coordinate is forced to be -1.
        columns = [fan.rays[u]] + [fan.rays[w] for w in facet]
        matrix = [[columns[j][i] for j in range(n)] for i in range(n)]
        sol = lp.solve_linear(matrix, list(fan.rays[u2]))
        if sol is None:
            raise FanError(f"wall {list(facet)} has degenerate spanning rays")
        if sol[0] != -1:
            raise FanError(
                f"cones {ca} and {cb} overlap: rays {u} and {u2} lie on the same "
                f"side of wall {list(facet)}")
        if any(x.denominator != 1 for x in sol):
            raise FanError(f"wall relation at {list(facet)} is not integral")
        pairings = [0] * m
        pairings[u] = 1
        pairings[u2] = 1
        for w, b in zip(facet, sol[1:]):
            pairings[w] = -int(b)
        comps = tuple(pairings[basis_perm[n + k]] for k in range(rank))
        curve = CurveClass(comps)
        for i in range(m):
            implied = sum(P[inv_perm[i]][k] * comps[k] for k in range(rank))
            if implied != pairings[i]:
                raise FanError(
                    f"wall {list(facet)} curve class is inconsistent with the "
                    f"divisor relations")
        walls.append(Wall(rays=facet, cones=(ca, cb), curve=curve,
                          pairings=tuple(pairings)))

    # Grading weight: an exact rational vector with weight(wall curve) >= 1
    # for every wall; its existence is projectivity.  Minimising the total
    # wall degree makes the choice deterministic.
    unique = sorted({w.curve.comps for w in walls})
    cons = [(tuple(Fraction(c) for c in comps), Fraction(1)) for comps in unique]
    objective = [sum(c[k] for c, _ in cons) for k in range(rank)]
    try:
        _, weight = lp.minimize(objective, cons, rank)
    except ValueError as exc:
        raise FanError("fan is not projective: no grading is positive on all "
                       "wall curves") from exc
    if any(w <= 0 for w in weight):
        # Fall back to a boxed problem when the minimiser grazes the boundary.
        boxed = cons + [(tuple(Fraction(1 if j == k else 0) for j in range(rank)),
                         Fraction(1)) for k in range(rank)]
        try:
            _, weight = lp.minimize(objective, boxed, rank)
        except ValueError as exc:
            raise FanError("fan admits no strictly positive grading on its wall "
                           "curves") from exc

    return ToricContext(fan=fan, n=n, m=m, basis_perm=basis_perm,
                        inv_perm=tuple(inv_perm), rays=rays_internal, nu=nu,
                        P=P, c1=c1, ample_weight=tuple(weight), walls=tuple(walls))


def wall_classes(ctx: ToricContext):
    """Curve classes of all walls, one entry per wall (duplicates retained)."""
    return [w.curve for w in ctx.walls]


def semi_fano_check(ctx: ToricContext):
    """Whether every wall curve has non-negative anticanonical degree.

    Returns ``(True, None)`` or ``(False, offending_wall)``.
    """
    for wall in ctx.walls:
        if ctx.degree(wall.curve) < 0:
            return False, wall
    return True, None


def is_vertex(ctx: ToricContext, ray: int) -> bool:
    """Whether the ray generator is a vertex of the fan polytope.

    The fan polytope is the convex hull of all primitive ray generators; a
    generator is a vertex exactly when some linear functional separates it
    strictly from the others, which is a rational feasibility problem.
    """
    if not 0 <= ray < ctx.m:
        raise FanError(f"ray index {ray} out of range")
    v = ctx.fan.rays[ray]
    cons = []
    for p in range(ctx.m):
        if p == ray:
            continue
        diff = tuple(Fraction(a - b) for a, b in zip(v, ctx.fan.rays[p]))
        cons.append((diff, Fraction(1)))
    return lp.feasible(cons, ctx.n)


def _polytope_facets(ctx: ToricContext):
    """Facets of the fan polytope as frozensets of ray indices (dim <= 3).

    Found by brute force over supporting hyperplanes through ``dim`` of the
    generators; fine for the small dimensions the engine supports.
    """
    cached = ctx._cache.get("polytope_facets")
    if cached is not None:
        return cached
    if ctx.n > 3:
        raise FanError("face analysis of the fan polytope is only implemented "
                       "for dimension <= 3")
    from itertools import combinations

    pts = ctx.fan.rays
    facets = set()
    for subset in combinations(range(ctx.m), ctx.n):
        matrix = [list(pts[i]) for i in subset]
        sol = lp.solve_linear(matrix, [1] * ctx.n)
        if sol is None:
            continue
        values = [sum(a * x for a, x in zip(sol, pts[p])) for p in range(ctx.m)]
        if all(val <= 1 for val in values):
            facets.add(frozenset(p for p, val in enumerate(values) if val == 1))
    facets = tuple(sorted(facets, key=lambda f: tuple(sorted(f))))
    ctx._cache["polytope_facets"] = facets
    return facets


def minimal_face(ctx: ToricContext, ray: int):
    """Ray indices of the smallest fan-polytope face containing the generator.

    The minimal face is the intersection of all facets through the point; a
    generator interior to the polytope (on no facet) yields the whole set.
    """
    if not 0 <= ray < ctx.m:
        raise FanError(f"ray index {ray} out of range")
    containing = [f for f in _polytope_facets(ctx) if ray in f]
    if not containing:
        return tuple(range(ctx.m))
    face = set(containing[0])
    for f in containing[1:]:
        face &= f
    return tuple(sorted(face))


def seidel_fan(ctx: ToricContext, ray: int, sign: str = "plus") -> Fan:
    """Fan of the fibrewise compactified mapping torus for a divisor rotation.

    The output is one dimension higher: every base ray ``v`` lifts to
    ``(0, v)``, and two new rays ``(1, 0, ..., 0)`` and ``(-1, +/- v_j)`` cap
    the fibre direction.  Each base cone spawns two lifted cones, one with
    each cap.  The "plus" fan compactifies the rotation around the divisor at
    ``ray``; "minus" uses the inverse rotation.
    """
    if not 0 <= ray < ctx.m:
        raise FanError(f"ray index {ray} out of range")
    if sign not in ("plus", "minus"):
        raise FanError(f"sign must be 'plus' or 'minus', got {sign!r}")
    vj = ctx.fan.rays[ray]
    if sign == "minus":
        vj = tuple(-x for x in vj)
    rays = [(1,) + (0,) * ctx.n, (-1,) + vj]
    rays.extend((0,) + v for v in ctx.fan.rays)
    cones = []
    for cone in ctx.fan.max_cones:
        lifted = [2 + i for i in cone]
        cones.append(lifted + [0])
        cones.append(lifted + [1])
    return parse_fan({
        "dim": ctx.n + 1,
        "rays": [list(r) for r in rays],
        "max_cones": cones,
    })
