"""Brute-force rational LP oracles, independent of the package solver.

Systems are lists of plain triples (coeffs: dict var -> Fraction,
const: Fraction, strict: bool), each meaning coeffs.x + const (<|<=) 0.
Feasibility is decided by vertex enumeration: strict relations get a
shared slack variable eps ("expr + eps <= 0"), eps is clamped to [-1, 1],
and the strict system is feasible inside the supplied (bounded!) region
iff the maximum of eps over the vertices of the closed polytope is > 0.
"""

from fractions import Fraction
from itertools import combinations

EPS = "eps"


def gauss_solve(matrix, rhs):
    """Solve a square rational system; None if singular."""
    n = len(matrix)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                factor = a[r][col]
                a[r] = [v - factor * w for v, w in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def brute_force_strict_feasible(constraints):
    """Exact feasibility of a mixed strict/non-strict system whose
    non-strict part bounds a polytope (callers must include box rows)."""
    variables = sorted({v for coeffs, _, _ in constraints for v in coeffs})
    cols = variables + [EPS]

    closed = []
    for coeffs, const, strict in constraints:
        row = dict(coeffs)
        if strict:
            row[EPS] = row.get(EPS, Fraction(0)) + 1
        closed.append((row, const))
    closed.append(({EPS: Fraction(1)}, Fraction(-1)))   # eps <= 1
    closed.append(({EPS: Fraction(-1)}, Fraction(-1)))  # eps >= -1

    def value(point, row, const):
        return const + sum(q * point[v] for v, q in row.items())

    best = None
    dim = len(cols)
    for chosen in combinations(range(len(closed)), dim):
        matrix = [[closed[i][0].get(v, Fraction(0)) for v in cols] for i in chosen]
        rhs = [-closed[i][1] for i in chosen]
        sol = gauss_solve(matrix, rhs)
        if sol is None:
            continue
        point = dict(zip(cols, sol))
        if all(value(point, row, const) <= 0 for row, const in closed):
            eps = point[EPS]
            if best is None or eps > best:
                best = eps
    return best is not None and best > 0


def check_infeasibility_certificate(constraints, multipliers):
    """Validate nonnegative multipliers combining the system into an absurd
    constant inequality; written from scratch on purpose."""
    if len(multipliers) != len(constraints):
        return False
    if any(lam < 0 for lam in multipliers):
        return False
    total_const = Fraction(0)
    total_coeffs: dict = {}
    used_strict = False
    for lam, (coeffs, const, strict) in zip(multipliers, constraints):
        if lam == 0:
            continue
        total_const += lam * const
        used_strict = used_strict or strict
        for v, q in coeffs.items():
            total_coeffs[v] = total_coeffs.get(v, Fraction(0)) + lam * q
    if any(total_coeffs.values()):
        return False
    return total_const > 0 or (total_const == 0 and used_strict)


def as_triples(forms):
    """Convert package LinearForm objects to the oracle's plain triples."""
    return [(dict(f.coeffs), f.constant, f.strict) for f in forms]
