"""Log-Fano boundary search: linear strict-inequality systems in the
symmetric boundary coefficients (a_2, ..., a_n), an exact feasibility
solver with checkable certificates, and full-enumeration verification of
candidate witnesses.

Anti-ampleness of K_n + sum a_s B[s] is an affine condition per F-curve of
the (n+1)-pointed space, plus one condition from the line-section degree.
The solver is Fourier-Motzkin elimination over exact rationals with a
strict/non-strict flag per inequality; every derived inequality carries
the multipliers that produced it, so infeasibility comes out as an
explicit nonnegative combination of the input forms reducing to an absurd
constant inequality, and feasibility comes out as a rational point. Both
certificates re-check by plain substitution.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .combinat import enumerate_four_partitions, enumerate_shapes
from .kmaps import (
    BoundaryCombo,
    ChsVerdict,
    canonical_class,
    chs_ample,
    k_build,
    pullback_alpha,
    pullback_beta,
)
from .mcurves import Verdict, f_curve_value
from .rationals import RationalLike, as_rational

__all__ = [
    "LinearForm",
    "Bounds",
    "FeasibilityResult",
    "WitnessVerdict",
    "WitnessReport",
    "SearchOutcome",
    "generate_constraints",
    "solve_feasibility",
    "verify_witness",
    "search_witness",
]


@dataclass(frozen=True)
class LinearForm:
    """An affine inequality  constant + sum coeffs[s] * a_s  (< or <=) 0."""

    constant: Fraction
    coeffs: tuple[tuple[int, Fraction], ...]
    strict: bool

    def __post_init__(self) -> None:
        pairs = tuple(sorted((s, q) for s, q in self.coeffs if q != 0))
        object.__setattr__(self, "coeffs", pairs)

    @classmethod
    def of(
        cls,
        constant: RationalLike,
        coeffs: Mapping[int, RationalLike],
        strict: bool = True,
    ) -> "LinearForm":
        return cls(
            as_rational(constant),
            tuple((int(s), as_rational(q)) for s, q in coeffs.items()),
            strict,
        )

    @property
    def relation(self) -> str:
        return "<0" if self.strict else "<=0"

    @property
    def coeff_map(self) -> dict[int, Fraction]:
        return dict(self.coeffs)

    def evaluate(self, point: Mapping[int, Fraction]) -> Fraction:
        total = self.constant
        for s, q in self.coeffs:
            total += q * point.get(s, Fraction(0))
        return total

    def satisfied_by(self, point: Mapping[int, Fraction]) -> bool:
        v = self.evaluate(point)
        return v < 0 if self.strict else v <= 0

    def to_json_dict(self) -> dict:
        return {
            "constant": str(self.constant),
            "coeffs": {str(s): str(q) for s, q in self.coeffs},
            "relation": self.relation,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "LinearForm":
        rel = data.get("relation", "<0")
        if rel not in ("<0", "<=0"):
            raise ValueError(f"unknown relation {rel!r}")
        return cls.of(
            as_rational(data["constant"]),
            {int(s): as_rational(q) for s, q in dict(data.get("coeffs", {})).items()},
            strict=(rel == "<0"),
        )

    def __str__(self) -> str:
        terms: list[tuple[str, str]] = []
        for s, q in self.coeffs:
            mag = abs(q)
            head = f"a{s}" if mag == 1 else f"{mag}*a{s}"
            terms.append(("-" if q < 0 else "+", head))
        if self.constant or not terms:
            terms.append(("-" if self.constant < 0 else "+", str(abs(self.constant))))
        sign, head = terms[0]
        body = ("-" if sign == "-" else "") + head
        for sign, head in terms[1:]:
            body += f" {sign} {head}"
        rel = "<" if self.strict else "<="
        return f"{body} {rel} 0"


@dataclass(frozen=True)
class Bounds:
    """One- or two-sided bounds per coefficient, kept non-strict."""

    lower: tuple[tuple[int, Fraction], ...] = ()
    upper: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def of(
        cls,
        lower: Mapping[int, RationalLike] | None = None,
        upper: Mapping[int, RationalLike] | None = None,
    ) -> "Bounds":
        lo = tuple(sorted((int(s), as_rational(q)) for s, q in (lower or {}).items()))
        hi = tuple(sorted((int(s), as_rational(q)) for s, q in (upper or {}).items()))
        return cls(lo, hi)

    @classmethod
    def box(
        cls, variables: Iterable[int], lo: RationalLike, hi: RationalLike
    ) -> "Bounds":
        vs = sorted(set(variables))
        return cls.of({s: lo for s in vs}, {s: hi for s in vs})

    def forms(self) -> tuple[LinearForm, ...]:
        out = [LinearForm.of(c, {s: -1}, strict=False) for s, c in self.lower]
        out += [LinearForm.of(-c, {s: 1}, strict=False) for s, c in self.upper]
        return tuple(out)

    def __str__(self) -> str:
        items = [f"a{s}>={c}" for s, c in self.lower]
        items += [f"a{s}<={c}" for s, c in self.upper]
        return ",".join(items)


def generate_constraints(n: int, reduced: bool = False) -> list[LinearForm]:
    """The strict system expressing anti-ampleness of K_n + sum a_s B[s].

    One form per F-curve of the (n+1)-pointed space (or per orbit shape
    under permutations fixing the extra label, when ``reduced``), plus the
    line-section degree form. Constants and coefficients are obtained by
    evaluating the intersection form on the pullbacks of K_n and of each
    unit combination B[s], so the symbolic system is, by linearity, exactly
    the numeric test it abbreviates.
    """
    if n < 3:
        raise ValueError(f"constraint generation needs n >= 3, got {n}")
    m = n + 1
    base = pullback_alpha(canonical_class(n))
    unit = {s: pullback_alpha(k_build(n, combo={s: 1})) for s in range(2, n + 1)}

    def form_at(P) -> LinearForm:
        const = f_curve_value(base, P)
        coeffs = {s: f_curve_value(unit[s], P) for s in range(2, n + 1)}
        return LinearForm.of(const, coeffs, strict=True)

    if reduced:
        forms = [form_at(rep) for _, rep in enumerate_shapes(m, special=m)]
    else:
        forms = [form_at(P) for P in enumerate_four_partitions(m)]
    beta_const = pullback_beta(canonical_class(n), 1)
    beta_coeffs = {s: pullback_beta(k_build(n, combo={s: 1}), 1) for s in range(2, n + 1)}
    forms.append(LinearForm.of(beta_const, beta_coeffs, strict=True))
    return forms


@dataclass(frozen=True)
class FeasibilityResult:
    """Either a rational point satisfying every form of the effective
    system, or nonnegative multipliers combining them into a contradiction.

    ``forms`` is the solved system itself (inputs followed by any bound
    forms), so the certificate is self-contained; ``multipliers`` is dense,
    aligned with ``forms``.
    """

    forms: tuple[LinearForm, ...]
    point: Mapping[int, Fraction] | None = None
    multipliers: tuple[Fraction, ...] | None = None

    @property
    def feasible(self) -> bool:
        return self.point is not None

    def check(self) -> bool:
        """Re-validate the certificate by substitution."""
        if self.feasible:
            return all(f.satisfied_by(self.point) for f in self.forms)
        lam = self.multipliers
        if lam is None or len(lam) != len(self.forms) or any(x < 0 for x in lam):
            return False
        const = Fraction(0)
        coeffs: dict[int, Fraction] = {}
        strict = False
        for x, f in zip(lam, self.forms):
            if not x:
                continue
            const += x * f.constant
            strict = strict or f.strict
            for s, q in f.coeffs:
                coeffs[s] = coeffs.get(s, Fraction(0)) + x * q
        if any(coeffs.values()):
            return False
        return const > 0 or (const == 0 and strict)

    def to_json_dict(self) -> dict:
        out: dict = {
            "status": "feasible" if self.feasible else "infeasible",
            "forms": [f.to_json_dict() for f in self.forms],
        }
        if self.feasible:
            out["point"] = {str(s): str(q) for s, q in sorted(self.point.items())}
        else:
            out["multipliers"] = [
                {"form": i, "lambda": str(x)}
                for i, x in enumerate(self.multipliers)
                if x
            ]
        return out


@dataclass
class _Ineq:
    # working row: coeffs.x + const (<|<=) 0, plus its provenance over the
    # effective input forms (hist[k] = multiplier of form k)
    coeffs: dict[int, Fraction]
    const: Fraction
    strict: bool
    hist: dict[int, Fraction]


def _primitive_scale(values: Iterable[Fraction]) -> Fraction:
    nz = [v for v in values if v]
    if not nz:
        return Fraction(1)
    denom = lcm(*(v.denominator for v in nz))
    numer = gcd(*(abs(v.numerator * denom // v.denominator) for v in nz))
    return Fraction(denom, numer)


def _normalized(row: _Ineq) -> _Ineq:
    scale = _primitive_scale(list(row.coeffs.values()) + [row.const])
    if scale != 1:
        row = _Ineq(
            {s: q * scale for s, q in row.coeffs.items()},
            row.const * scale,
            row.strict,
            {k: x * scale for k, x in row.hist.items()},
        )
    return row


def _is_contradiction(row: _Ineq) -> bool:
    return not row.coeffs and (row.const > 0 or (row.const == 0 and row.strict))


def _stronger(a: _Ineq, b: _Ineq) -> bool:
    # for identical primitive coefficient vectors, the larger constant wins,
    # a strict relation breaking the tie (e + c < 0 implies e + c' <= 0 for
    # any c' <= c)
    return a.const > b.const or (a.const == b.const and a.strict and not b.strict)


def _push(table: dict[tuple, _Ineq], row: _Ineq) -> None:
    key = tuple(sorted(row.coeffs.items()))
    held = table.get(key)
    if held is None or _stronger(row, held):
        table[key] = row


def solve_feasibility(
    forms: Sequence[LinearForm], bounds: Bounds | None = None
) -> FeasibilityResult:
    """Exact strict-aware feasibility by Fourier-Motzkin elimination.

    Each surviving row keeps the nonnegative multipliers that derived it
    from the inputs. Rows are rescaled to primitive integer vectors and,
    among rows with the same coefficient vector, only the strongest is
    kept; the variable eliminated next is the one producing the fewest
    combination rows. Back-substitution picks a rational point strictly
    inside every strict bound.
    """
    eff = tuple(forms) + (bounds.forms() if bounds is not None else ())

    table: dict[tuple, _Ineq] = {}
    for idx, f in enumerate(eff):
        row = _normalized(
            _Ineq(dict(f.coeffs), f.constant, f.strict, {idx: Fraction(1)})
        )
        if _is_contradiction(row):
            return _infeasible(eff, row.hist)
        if row.coeffs:
            _push(table, row)

    remaining = sorted({s for row in table.values() for s in row.coeffs})
    stages: list[tuple[int, list[_Ineq], list[_Ineq]]] = []
    while remaining:
        rows = list(table.values())

        def fill(x: int) -> int:
            npos = sum(1 for r in rows if r.coeffs.get(x, 0) > 0)
            nneg = sum(1 for r in rows if r.coeffs.get(x, 0) < 0)
            return npos * nneg - npos - nneg

        x = min(remaining, key=lambda s: (fill(s), s))
        remaining.remove(x)
        pos = [r for r in rows if r.coeffs.get(x, 0) > 0]
        neg = [r for r in rows if r.coeffs.get(x, 0) < 0]
        stages.append((x, pos, neg))
        table = {
            tuple(sorted(r.coeffs.items())): r for r in rows if x not in r.coeffs
        }
        for p in pos:
            lp = 1 / p.coeffs[x]
            for q in neg:
                lq = -1 / q.coeffs[x]
                coeffs: dict[int, Fraction] = {}
                for s, c in p.coeffs.items():
                    if s != x:
                        coeffs[s] = lp * c
                for s, c in q.coeffs.items():
                    if s != x:
                        coeffs[s] = coeffs.get(s, Fraction(0)) + lq * c
                coeffs = {s: c for s, c in coeffs.items() if c}
                hist = {k: lp * v for k, v in p.hist.items()}
                for k, v in q.hist.items():
                    hist[k] = hist.get(k, Fraction(0)) + lq * v
                row = _normalized(
                    _Ineq(coeffs, lp * p.const + lq * q.const, p.strict or q.strict, hist)
                )
                if _is_contradiction(row):
                    return _infeasible(eff, row.hist)
                if row.coeffs:
                    _push(table, row)

    point: dict[int, Fraction] = {}
    for x, pos, neg in reversed(stages):
        point[x] = _pick_value(x, pos, neg, point)
    return FeasibilityResult(eff, point=point)


def _infeasible(
    eff: tuple[LinearForm, ...], hist: Mapping[int, Fraction]
) -> FeasibilityResult:
    multipliers = tuple(hist.get(i, Fraction(0)) for i in range(len(eff)))
    result = FeasibilityResult(eff, multipliers=multipliers)
    assert result.check(), "derived infeasibility certificate failed to validate"
    return result


def _pick_value(
    x: int,
    pos: Sequence[_Ineq],
    neg: Sequence[_Ineq],
    point: Mapping[int, Fraction],
) -> Fraction:
    # rows here mention x and later (already assigned) variables only
    ub: tuple[Fraction, bool] | None = None
    for r in pos:
        rest = r.const + sum(c * point[s] for s, c in r.coeffs.items() if s != x)
        v = -rest / r.coeffs[x]
        if ub is None or v < ub[0] or (v == ub[0] and r.strict):
            ub = (v, r.strict)
    lb: tuple[Fraction, bool] | None = None
    for r in neg:
        rest = r.const + sum(c * point[s] for s, c in r.coeffs.items() if s != x)
        v = -rest / r.coeffs[x]
        if lb is None or v > lb[0] or (v == lb[0] and r.strict):
            lb = (v, r.strict)
    if lb is None and ub is None:
        return Fraction(0)
    if lb is None:
        return ub[0] - 1
    if ub is None:
        return lb[0] + 1
    if lb[0] < ub[0]:
        return (lb[0] + ub[0]) / 2
    assert lb[0] == ub[0] and not lb[1] and not ub[1], "elimination missed a conflict"
    return lb[0]


class WitnessVerdict(enum.Enum):
    VERIFIED = "verified"
    REFUTED = "refuted"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class WitnessReport:
    """Full-enumeration verdict on one boundary combination.

    VERIFIED means K_n + D is anti-ample with every coefficient in [0, 1]:
    a log-Fano boundary witness. The klt note records that all inequalities
    hold strictly, so shrinking D by a small factor preserves them while
    making the pair coefficients sub-boundary.
    """

    n: int
    combo: BoundaryCombo
    verdict: WitnessVerdict
    reason: str | None
    f_min: Fraction
    f_max: Fraction
    beta_degree: Fraction
    klt_note: bool

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "combo": {str(s): str(q) for s, q in self.combo.a},
            "verdict": self.verdict.value,
            "reason": self.reason,
            "f_min": str(self.f_min),
            "f_max": str(self.f_max),
            "beta_degree": str(self.beta_degree),
            "klt_note": self.klt_note,
        }


def _as_combo(n: int, combo: BoundaryCombo | Mapping[int, RationalLike]) -> BoundaryCombo:
    if isinstance(combo, BoundaryCombo):
        if combo.n != n:
            raise ValueError(f"combo is on n={combo.n}, expected {n}")
        return combo
    return BoundaryCombo.of(n, combo)


def verify_witness(
    n: int,
    combo: BoundaryCombo | Mapping[int, RationalLike],
    *,
    threads: int | None = None,
) -> WitnessReport:
    """Check a candidate boundary by scanning every F-curve (never the
    reduced system) and every line-section degree."""
    if n < 3:
        raise ValueError(f"witness verification needs n >= 3, got {n}")
    combo = _as_combo(n, combo)
    H = canonical_class(n) + combo.to_divisor()
    decision = chs_ample(H, "anti-ample", threads=threads)

    A = pullback_alpha(H)
    values = [f_curve_value(A, P) for P in enumerate_four_partitions(n + 1)]
    f_min, f_max = min(values), max(values)

    degs = {d for _, d in decision.beta}
    assert len(degs) == 1, "symmetric combination must have label-independent degree"
    beta = degs.pop()

    in_unit = all(0 <= q <= 1 for _, q in combo.a)
    if decision.verdict is ChsVerdict.FAILS:
        if decision.alpha.verdict is Verdict.NOT_POSITIVE:
            reason = (
                f"F-curve {decision.alpha.witness} meets the class in degree "
                f"{decision.alpha.witness_value}, not < 0"
            )
        else:
            reason = f"line-section degree {beta} is not < 0"
        verdict = WitnessVerdict.REFUTED
    elif not in_unit:
        bad = next(f"a{s}={q}" for s, q in combo.a if not 0 <= q <= 1)
        reason = f"boundary coefficient outside [0,1]: {bad}"
        verdict = WitnessVerdict.REFUTED
    elif decision.verdict is ChsVerdict.HOLDS:
        verdict, reason = WitnessVerdict.VERIFIED, None
    else:
        verdict = WitnessVerdict.UNDECIDED
        reason = (
            f"all inequalities hold but {n + 1} markings exceed the range "
            "where F-positivity is known to decide ampleness"
        )
    return WitnessReport(
        n=n,
        combo=combo,
        verdict=verdict,
        reason=reason,
        f_min=f_min,
        f_max=f_max,
        beta_degree=beta,
        klt_note=verdict is WitnessVerdict.VERIFIED,
    )


@dataclass(frozen=True)
class SearchOutcome:
    feasibility: FeasibilityResult
    report: WitnessReport | None

    def to_json_dict(self) -> dict:
        out = {"feasibility": self.feasibility.to_json_dict()}
        if self.report is not None:
            out["report"] = self.report.to_json_dict()
        return out


def search_witness(
    n: int,
    bounds: Bounds | None = None,
    *,
    threads: int | None = None,
) -> SearchOutcome:
    """Solve the reduced system for a boundary combination, then confirm any
    feasible point by full enumeration before reporting it.

    The solved system asserts anti-ampleness only, so with loose bounds the
    point may leave the [0, 1] coefficient range; the report then says
    REFUTED for the range reason while the feasibility certificate stands.
    A disagreement on the scan itself would mean the reduced system is
    wrong and raises.
    """
    forms = generate_constraints(n, reduced=True)
    feas = solve_feasibility(forms, bounds)
    if not feas.feasible:
        return SearchOutcome(feas, None)
    combo = BoundaryCombo.of(n, {s: q for s, q in feas.point.items() if q})
    report = verify_witness(n, combo, threads=threads)
    if report.verdict is WitnessVerdict.REFUTED and not (
        report.f_max < 0 and report.beta_degree < 0
    ):
        raise RuntimeError(
            "solver point failed full-enumeration verification; "
            "reduced and full systems disagree"
        )
    return SearchOutcome(feas, report)
