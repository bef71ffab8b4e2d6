"""Exact linear programming over the rationals via Fourier-Motzkin elimination.

The fan/curve machinery only ever deals with a handful of variables (the rank
of H_2, so at most ~6 in practice), which is squarely inside the regime where
Fourier-Motzkin is the simplest exact method.  Everything here works with
``fractions.Fraction`` and integers; no floating point is involved anywhere.

A constraint is a pair ``(coeffs, rhs)`` encoding ``coeffs . x >= rhs``.
Entry points:

* :func:`feasible` / :func:`witness` — decide a system, produce a rational point.
* :func:`minimize` — exact minimum of a linear objective (raises
  :class:`LPUnboundedError` when unbounded below).
* :func:`integer_points` — enumerate all lattice points of a bounded
  polyhedron in deterministic lexicographic order.
* :func:`solve_linear` — exact Gaussian solve of a square system (used for
  dual bases and wall relations).
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, floor, gcd


class LPUnboundedError(ArithmeticError):
    """The objective is unbounded below on the feasible region."""


def _norm(coeffs, rhs):
    """Scale a constraint to coprime integer coefficients (keeps exactness
    and makes deduplication meaningful)."""
    coeffs = tuple(Fraction(c) for c in coeffs)
    rhs = Fraction(rhs)
    denoms = [c.denominator for c in coeffs] + [rhs.denominator]
    scale = 1
    for d in denoms:
        scale = scale * d // gcd(scale, d)
    ints = [int(c * scale) for c in coeffs]
    b = int(rhs * scale)
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1 and b % g == 0:
        ints = [v // g for v in ints]
        b //= g
    return tuple(Fraction(v) for v in ints), Fraction(b)


def _dedupe(cons):
    best = {}
    for coeffs, rhs in cons:
        key = coeffs
        if key not in best or rhs > best[key]:
            best[key] = rhs
    return [(k, v) for k, v in best.items()]


def eliminate(cons, j):
    """Project a system onto the hyperplane ``x_j`` forgotten.

    Standard Fourier-Motzkin: pair every lower bound on ``x_j`` with every
    upper bound.  The variable's slot is kept (as coefficient zero) so that
    indices stay stable across passes.
    """
    pos, neg, zero = [], [], []
    for coeffs, rhs in cons:
        a = coeffs[j]
        if a > 0:
            pos.append((coeffs, rhs))
        elif a < 0:
            neg.append((coeffs, rhs))
        else:
            zero.append((coeffs, rhs))
    out = list(zero)
    for cp, bp in pos:
        for cn, bn in neg:
            ap, an = cp[j], -cn[j]
            coeffs = tuple(an * x + ap * y for x, y in zip(cp, cn))
            out.append(_norm(coeffs, an * bp + ap * bn))
    return _dedupe(out)


def _chain(cons, nvars):
    """Eliminate variables nvars-1, nvars-2, ..., returning each stage.

    ``stages[k]`` constrains variables ``x_0 .. x_{k}`` only.
    """
    stages = [None] * nvars
    current = _dedupe([_norm(c, b) for c, b in cons])
    stages[nvars - 1] = current
    for j in range(nvars - 1, 0, -1):
        current = eliminate(current, j)
        stages[j - 1] = current
    return stages


def _var_bounds(cons, j, point):
    """Bounds on ``x_j`` given values for ``x_0 .. x_{j-1}`` in ``point``."""
    lo, hi = None, None
    for coeffs, rhs in cons:
        a = coeffs[j]
        if not a:
            continue
        rest = rhs - sum(coeffs[i] * point[i] for i in range(j))
        bound = rest / a
        if a > 0:
            if lo is None or bound > lo:
                lo = bound
        else:
            if hi is None or bound < hi:
                hi = bound
    return lo, hi


def feasible(cons, nvars) -> bool:
    if not cons:
        return True
    stages = _chain(cons, nvars)
    for coeffs, rhs in stages[0]:
        if not coeffs[0]:
            if rhs > 0:
                return False
    lo, hi = _var_bounds(stages[0], 0, ())
    return lo is None or hi is None or lo <= hi


def witness(cons, nvars):
    """A rational feasible point, or None.

    Deterministic back-substitution: pick the lower bound when finite, else
    the upper bound, else zero.
    """
    if not cons:
        return tuple(Fraction(0) for _ in range(nvars))
    stages = _chain(cons, nvars)
    for coeffs, rhs in stages[0]:
        if not coeffs[0] and rhs > 0:
            return None
    point = []
    for j in range(nvars):
        lo, hi = _var_bounds(stages[j], j, point)
        if lo is not None and hi is not None and lo > hi:
            return None
        if lo is not None:
            point.append(lo)
        elif hi is not None:
            point.append(hi)
        else:
            point.append(Fraction(0))
    return tuple(point)


def minimize(objective, cons, nvars):
    """Exact minimum of ``objective . x`` subject to ``cons``.

    Returns ``(value, point)``.  Raises :class:`LPUnboundedError` when the
    objective is unbounded below and ``ValueError`` when infeasible.

    Implemented by introducing ``t = objective . x`` as an extra leading
    variable, eliminating all the ``x``'s, and reading off the lower bound of
    the projected interval in ``t``.
    """
    objective = tuple(Fraction(c) for c in objective)
    lifted = []
    # t - objective.x >= 0 and objective.x - t >= 0 pin t to the objective.
    lifted.append(_norm((Fraction(1),) + tuple(-c for c in objective), 0))
    lifted.append(_norm((Fraction(-1),) + objective, 0))
    for coeffs, rhs in cons:
        lifted.append(_norm((Fraction(0),) + tuple(coeffs), rhs))
    stages = _chain(lifted, nvars + 1)
    tcons = stages[0]
    for coeffs, rhs in tcons:
        if not coeffs[0] and rhs > 0:
            raise ValueError("infeasible system")
    lo, hi = _var_bounds(tcons, 0, ())
    if lo is not None and hi is not None and lo > hi:
        raise ValueError("infeasible system")
    if lo is None:
        raise LPUnboundedError("objective unbounded below")
    point = [lo]
    for j in range(1, nvars + 1):
        blo, bhi = _var_bounds(stages[j], j, point)
        point.append(blo if blo is not None else (bhi if bhi is not None else Fraction(0)))
    return lo, tuple(point[1:])


def integer_points(cons, nvars):
    """All integer points of the (bounded) polyhedron, lexicographically.

    Recursively brackets each coordinate via the elimination chain.  Raises
    :class:`LPUnboundedError` if some coordinate is unbounded, since the
    enumeration would then be infinite.
    """
    if nvars == 0:
        return [()]
    normed = _dedupe([_norm(c, b) for c, b in cons])
    stages = _chain(normed, nvars)
    for coeffs, rhs in stages[0]:
        if not coeffs[0] and rhs > 0:
            return []

    out = []

    def descend(j, point):
        lo, hi = _var_bounds(stages[j], j, point)
        if lo is None or hi is None:
            raise LPUnboundedError(f"coordinate {j} is unbounded; cannot enumerate")
        if lo > hi:
            return
        for v in range(ceil(lo), floor(hi) + 1):
            nxt = point + (Fraction(v),)
            if j + 1 == nvars:
                # The elimination chain is sound but not exact stage-by-stage
                # for integer points; filter against the original system.
                if all(sum(c * x for c, x in zip(coeffs, nxt)) >= rhs
                       for coeffs, rhs in normed):
                    out.append(tuple(int(x) for x in nxt))
            else:
                descend(j + 1, nxt)

    descend(0, ())
    return out


def solve_linear(matrix, rhs):
    """Solve the square system ``matrix . x = rhs`` exactly.

    Returns a tuple of Fractions, or None when the matrix is singular.
    """
    n = len(matrix)
    aug = [[Fraction(matrix[i][j]) for j in range(n)] + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return tuple(aug[i][n] for i in range(n))
