"""Exact rational linear feasibility: Ax = b, x >= 0.

Phase-1 simplex with Bland's rule over exact arithmetic.  Constraint rows
are scaled to integers once (equalities are scale-invariant) and pivots use
fraction-free integer updates with gcd normalisation, so no floating point
and no rounding enters anywhere.  Infeasibility returns a Farkas witness y
with y.A <= 0 and y.b > 0, read off the artificial columns of the final
tableau; feasibility returns the basic solution.  Both certificates are
re-verified by the caller independently of the solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class SolverError(RuntimeError):
    """The solver failed to terminate or hit an inconsistent state."""


@dataclass
class SimplexResult:
    feasible: bool
    solution: dict | None  # variable index -> Fraction
    farkas: list | None  # one Fraction per original constraint row
    pivots: int


def _row_to_ints(coeffs, rhs):
    denom = rhs.denominator if isinstance(rhs, Fraction) else 1
    for c in coeffs:
        if isinstance(c, Fraction):
            denom = denom * c.denominator // gcd(denom, c.denominator)
    ints = [int(c * denom) for c in coeffs]
    b = int(rhs * denom)
    return ints, b, denom


def solve_feasibility(rows, rhs, max_pivots=200000, presolve=True):
    """Decide feasibility of rows . x = rhs with x >= 0.

    rows: list of coefficient lists (int or Fraction); rhs: list of the same.

    An exact presolve first propagates rows with zero right-hand side and
    non-negative coefficients (their support must vanish); the phase-1
    simplex then runs on the reduced system.  Solutions and Farkas witnesses
    are always reported against the original rows.
    """
    if presolve:
        return _solve_with_presolve(rows, rhs, max_pivots)
    return _solve_core(rows, rhs, max_pivots)


def _solve_with_presolve(rows, rhs, max_pivots):
    m = len(rows)
    n = len(rows[0]) if m else 0
    rhs_f = [Fraction(b) for b in rhs]
    cover = {}  # killed variable -> index of the zero row forcing it
    zero_rows = []
    for i in range(m):
        if rhs_f[i] == 0 and all(c >= 0 for c in rows[i]):
            zero_rows.append(i)
            for j in range(n):
                if rows[i][j] > 0:
                    cover.setdefault(j, i)
    kept = [j for j in range(n) if j not in cover]
    zero_set = set(zero_rows)

    def extend_farkas(y_partial):
        """Lift a witness on the reduced system to the original rows."""
        y = [Fraction(0)] * m
        for i, v in y_partial.items():
            y[i] = v
        for j, z in cover.items():
            c_j = sum(y[i] * Fraction(rows[i][j]) for i in range(m) if i not in zero_set)
            if c_j > 0:
                y[z] -= c_j / Fraction(rows[z][j])
        return y

    reduced_rows = []
    reduced_ids = []
    for i in range(m):
        if i in zero_set:
            continue
        proj = [rows[i][j] for j in kept]
        if rhs_f[i] != 0 and not any(proj):
            # the row's support was entirely forced to zero
            sign = 1 if rhs_f[i] > 0 else -1
            y = extend_farkas({i: Fraction(sign)})
            return SimplexResult(False, None, y, 0)
        reduced_rows.append(proj)
        reduced_ids.append(i)

    if not reduced_rows:
        return SimplexResult(True, {}, None, 0)

    result = _solve_core(reduced_rows, [rhs_f[i] for i in reduced_ids], max_pivots)
    if result.feasible:
        solution = {kept[j]: v for j, v in result.solution.items()}
        return SimplexResult(True, solution, None, result.pivots)
    y = extend_farkas(dict(zip(reduced_ids, result.farkas)))
    return SimplexResult(False, None, y, result.pivots)


def _solve_core(rows, rhs, max_pivots):
    m = len(rows)
    n = len(rows[0]) if m else 0
    tableau = []
    row_scales = []
    for coeffs, b in zip(rows, rhs):
        ints, bi, denom = _row_to_ints(coeffs, b)
        if bi < 0:
            ints = [-v for v in ints]
            bi = -bi
            denom = -denom
        tableau.append(ints + [0] * m + [bi])
        row_scales.append(denom)
    for i in range(m):
        tableau[i][n + i] = 1

    width = n + m + 1
    basis = list(range(n, n + m))

    # objective: minimise the sum of artificials; reduced-cost row with its
    # own positive scale
    z = [0] * width
    for j in range(width):
        z[j] = -sum(tableau[i][j] for i in range(m))
    for i in range(m):
        z[n + i] += 1  # artificial costs are one
    zscale = 1

    def reduce_row(row):
        g = 0
        for v in row:
            g = gcd(g, abs(v))
            if g == 1:
                return row, 1
        if g > 1:
            return [v // g for v in row], g
        return row, 1

    pivots = 0
    while True:
        # Bland: first structural column with negative reduced cost
        enter = None
        for j in range(n):
            if z[j] < 0:
                enter = j
                break
        if enter is None:
            break
        # ratio test over rows with positive entries; Bland tie-break on the
        # smallest basic variable index
        best = None
        for i in range(m):
            a = tableau[i][enter]
            if a > 0:
                key = (Fraction(tableau[i][width - 1], a), basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise SolverError("phase-1 objective unbounded: inconsistent state")
        r = best[1]
        prow = tableau[r]
        p = prow[enter]
        for i in range(m):
            if i == r:
                continue
            a = tableau[i][enter]
            if a:
                updated = [x * p - a * y for x, y in zip(tableau[i], prow)]
                tableau[i], _ = reduce_row(updated)
        zc = z[enter]
        if zc:
            # the update is invariant under the internal scaling of prow
            z = [x * p - zc * y for x, y in zip(z, prow)]
            zscale *= p
            gz = 0
            for v in z:
                gz = gcd(gz, abs(v))
                if gz == 1:
                    break
            gz = gcd(gz, zscale)
            if gz > 1:
                z = [v // gz for v in z]
                zscale //= gz
        basis[r] = enter
        tableau[r], _ = reduce_row(prow)
        pivots += 1
        if pivots > max_pivots:
            raise SolverError("pivot limit exceeded")

    # objective value = sum of artificial basic values
    objective = Fraction(0)
    for i in range(m):
        if basis[i] >= n:
            pe = tableau[i][basis[i]]
            objective += Fraction(tableau[i][width - 1], pe)

    if objective == 0:
        solution = {}
        for i in range(m):
            if basis[i] < n:
                val = Fraction(tableau[i][width - 1], tableau[i][basis[i]])
                if val:
                    solution[basis[i]] = val
        return SimplexResult(True, solution, None, pivots)

    # infeasible: read the dual off the artificial reduced costs, then map
    # back through the initial row scaling
    y_scaled = [1 - Fraction(z[n + i], zscale) for i in range(m)]
    farkas = [y_scaled[i] * row_scales[i] for i in range(m)]
    return SimplexResult(False, None, farkas, pivots)


def verify_solution(rows, rhs, solution):
    """Exact check that the sparse solution satisfies every constraint."""
    n = len(rows[0]) if rows else 0
    for j, v in solution.items():
        if v < 0 or not (0 <= j < n):
            return False
    for coeffs, b in zip(rows, rhs):
        total = sum(Fraction(coeffs[j]) * v for j, v in solution.items())
        if total != Fraction(b):
            return False
    return True


def verify_farkas(rows, rhs, y):
    """Exact check of the infeasibility witness: y.A <= 0 < y.b."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    if len(y) != m:
        return False
    for j in range(n):
        if sum(y[i] * Fraction(rows[i][j]) for i in range(m)) > 0:
            return False
    return sum(y[i] * Fraction(rhs[i]) for i in range(m)) > 0
