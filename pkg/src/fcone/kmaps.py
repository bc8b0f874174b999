"""Divisor classes on the space of n-pointed degree-1 stable maps to the
projective line, their canonical class, and the two pullbacks that drive
the ampleness test.

The basis is L_1, ..., L_n (the locus where the i-th point maps to 0)
together with the boundary divisors B_S for 2 <= |S| <= n. Unlike the
curve side, B_S and B_{S^c} are different divisors (S names the side whose
component gets collapsed), so B-keys are raw subsets with no complement
identification.

Pullback calculus used throughout (Coskun-Harris-Starr):

    along the curve-side map from the (n+1)-pointed space,
        B_S  ->  boundary key S          for |S| <= n-1,
        B_S  ->  -psi_{n+1}              for S = {1,...,n},
        L_i  ->  0;
    along the i-th line section,
        B_S  ->  degree -1               for S = {1,...,n} and S = {i}^c,
        B_S  ->  0                       otherwise,
        L_i  ->  degree 1,   L_j -> 0 for j != i.

A divisor is ample iff both pullbacks are (the curve side via the F-curve
scan, every line section by sign of its degree); anti-ample is the same
test with all signs reversed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Literal, Mapping

from .combinat import Subset, canonical_key
from .mcurves import AmpDecision, MDivisor, Verdict, f_positivity
from .rationals import RationalLike, as_rational

__all__ = [
    "KDivisor",
    "BoundaryCombo",
    "ChsVerdict",
    "ChsDecision",
    "boundary_keys",
    "k_build",
    "canonical_class",
    "pullback_alpha",
    "pullback_beta",
    "beta_degrees",
    "chs_ample",
]


def boundary_keys(n: int) -> Iterator[Subset]:
    """All raw B-keys on the n-pointed space: subsets with 2 <= |S| <= n,
    in deterministic (size, labels) order."""
    if n < 2:
        return
    subsets = [Subset(mask, n) for mask in range(1, 1 << n) if mask.bit_count() >= 2]
    yield from sorted(subsets, key=Subset.sort_key)


@dataclass(frozen=True)
class KDivisor:
    """Exact divisor class on the n-pointed stable-map space; immutable."""

    n: int
    l_coeffs: Mapping[int, Fraction]
    b_coeffs: Mapping[Subset, Fraction]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        lc: dict[int, Fraction] = {}
        for i, q in self.l_coeffs.items():
            if not 1 <= i <= self.n:
                raise ValueError(f"L-label {i} out of range 1..{self.n}")
            v = as_rational(q)
            if v:
                lc[i] = lc.get(i, Fraction(0)) + v
        bc: dict[Subset, Fraction] = {}
        for key, q in self.b_coeffs.items():
            S = key if isinstance(key, Subset) else Subset.from_labels(key, self.n)
            if S.m != self.n:
                raise ValueError(f"B-key ambient {S.m} does not match n={self.n}")
            if S.size < 2:
                raise ValueError(f"B-key needs |S| >= 2, got {S!r}")
            v = as_rational(q)
            if v:
                bc[S] = bc.get(S, Fraction(0)) + v
        object.__setattr__(self, "l_coeffs", {i: v for i, v in lc.items() if v})
        object.__setattr__(self, "b_coeffs", {S: v for S, v in bc.items() if v})

    @classmethod
    def zero(cls, n: int) -> "KDivisor":
        return cls(n, {}, {})

    def l_coefficient(self, i: int) -> Fraction:
        if not 1 <= i <= self.n:
            raise ValueError(f"label {i} out of range 1..{self.n}")
        return self.l_coeffs.get(i, Fraction(0))

    def b_coefficient(self, key: Subset | Iterable[int]) -> Fraction:
        S = key if isinstance(key, Subset) else Subset.from_labels(key, self.n)
        if S.m != self.n:
            raise ValueError(f"key ambient {S.m} does not match n={self.n}")
        return self.b_coeffs.get(S, Fraction(0))

    def is_zero(self) -> bool:
        return not self.l_coeffs and not self.b_coeffs

    def __add__(self, other: "KDivisor") -> "KDivisor":
        if other.n != self.n:
            raise ValueError(f"mixed n: {self.n} vs {other.n}")
        lc = dict(self.l_coeffs)
        for i, q in other.l_coeffs.items():
            lc[i] = lc.get(i, Fraction(0)) + q
        bc = dict(self.b_coeffs)
        for S, q in other.b_coeffs.items():
            bc[S] = bc.get(S, Fraction(0)) + q
        return KDivisor(self.n, lc, bc)

    def __sub__(self, other: "KDivisor") -> "KDivisor":
        return self + (-1) * other

    def __neg__(self) -> "KDivisor":
        return (-1) * self

    def __rmul__(self, scalar: RationalLike) -> "KDivisor":
        c = as_rational(scalar)
        return KDivisor(
            self.n,
            {i: c * q for i, q in self.l_coeffs.items()},
            {S: c * q for S, q in self.b_coeffs.items()},
        )

    __mul__ = __rmul__

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "L": {str(i): str(self.l_coeffs[i]) for i in sorted(self.l_coeffs)},
            "B": {
                str(S): str(self.b_coeffs[S])
                for S in sorted(self.b_coeffs, key=Subset.sort_key)
            },
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "KDivisor":
        """Accepts the explicit {"n","L","B"} form and the combo shorthand
        {"n", "K": bool, "a": {...}} meaning K_n + sum a_s B[s]."""
        n = data.get("n")
        if not isinstance(n, int):
            raise ValueError("KDivisor JSON needs an integer 'n'")
        if "a" in data or "K" in data:
            combo = BoundaryCombo.of(
                n, {int(s): as_rational(q) for s, q in dict(data.get("a", {})).items()}
            )
            div = combo.to_divisor()
            if data.get("K", False):
                div = canonical_class(n) + div
            return div
        l = {int(i): as_rational(q) for i, q in dict(data.get("L", {})).items()}
        b = {
            Subset.parse(key, n): as_rational(q)
            for key, q in dict(data.get("B", {})).items()
        }
        return cls(n, l, b)


@dataclass(frozen=True)
class BoundaryCombo:
    """A symmetric boundary combination sum a_s B[s], B[s] the sum of all
    B_S with |S| = s."""

    n: int
    a: tuple[tuple[int, Fraction], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        clean: dict[int, Fraction] = {}
        for s, q in self.a:
            if not 2 <= s <= self.n:
                raise ValueError(f"B[{s}] does not exist on n={self.n}")
            v = as_rational(q)
            if v:
                clean[s] = clean.get(s, Fraction(0)) + v
        object.__setattr__(
            self, "a", tuple(sorted((s, v) for s, v in clean.items() if v))
        )

    @classmethod
    def of(cls, n: int, coefficients: Mapping[int, RationalLike]) -> "BoundaryCombo":
        return cls(n, tuple((s, as_rational(q)) for s, q in coefficients.items()))

    @property
    def coefficients(self) -> dict[int, Fraction]:
        return dict(self.a)

    def get(self, s: int) -> Fraction:
        return dict(self.a).get(s, Fraction(0))

    def to_divisor(self) -> KDivisor:
        b: dict[Subset, Fraction] = {}
        coeff = dict(self.a)
        for S in boundary_keys(self.n):
            q = coeff.get(S.size)
            if q:
                b[S] = q
        return KDivisor(self.n, {}, b)

    def __str__(self) -> str:
        if not self.a:
            return "0"
        return ",".join(f"a{s}={q}" for s, q in self.a)


def k_build(
    n: int,
    l: RationalLike | Mapping[int, RationalLike] | None = None,
    combo: BoundaryCombo | Mapping[int, RationalLike] | None = None,
    b: Mapping | None = None,
) -> KDivisor:
    """Assemble a divisor from L-coefficients plus either a symmetric combo
    or explicit B-coefficients.

    ``l`` may be one rational (applied to every L_i) or a per-label map.
    """
    if combo is not None and b is not None:
        raise ValueError("pass a symmetric combo or explicit B-coefficients, not both")
    if isinstance(l, Mapping):
        l_map = {int(i): as_rational(q) for i, q in l.items()}
    elif l is not None:
        c = as_rational(l)
        l_map = {i: c for i in range(1, n + 1)}
    else:
        l_map = {}
    div = KDivisor(n, l_map, {})
    if combo is not None:
        if not isinstance(combo, BoundaryCombo):
            combo = BoundaryCombo.of(n, combo)
        if combo.n != n:
            raise ValueError(f"combo is on n={combo.n}, expected {n}")
        div = div + combo.to_divisor()
    if b is not None:
        div = div + KDivisor(n, {}, dict(b))
    return div


def canonical_class(n: int) -> KDivisor:
    """K_n = -2 * sum L_i + sum over s >= 3 of (s-2) B[s]."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    combo = {s: Fraction(s - 2) for s in range(3, n + 1)}
    return k_build(n, l=Fraction(-2), combo=combo)


def pullback_alpha(H: KDivisor) -> MDivisor:
    """Pull back along the curve-side map into the (n+1)-pointed space.

    B_S with |S| <= n-1 lands on the boundary key S, the full-set key lands
    on the singleton {n+1} (that key stores -psi_{n+1}), and the L_i die.
    """
    n = H.n
    if n < 3:
        raise ValueError(f"curve-side pullback needs n >= 3, got {n}")
    m = n + 1
    full = (1 << n) - 1
    coeffs: dict[Subset, Fraction] = {}
    for S, q in H.b_coeffs.items():
        if S.mask == full:
            key = Subset.from_labels([m], m)
        else:
            key = canonical_key(Subset(S.mask, m))
        coeffs[key] = coeffs.get(key, Fraction(0)) + q
    return MDivisor(m, coeffs)


def pullback_beta(H: KDivisor, i: int) -> Fraction:
    """Degree of the pullback along the i-th line section."""
    n = H.n
    if not 1 <= i <= n:
        raise ValueError(f"label {i} out of range 1..{n}")
    deg = H.l_coefficient(i)
    deg -= H.b_coefficient(Subset((1 << n) - 1, n))
    if n >= 3:
        # {i}^c only exists as a key for n >= 3
        deg -= H.b_coefficient(Subset.from_labels([i], n).complement())
    return deg


def beta_degrees(H: KDivisor) -> tuple[tuple[int, Fraction], ...]:
    return tuple((i, pullback_beta(H, i)) for i in range(1, H.n + 1))


class ChsVerdict(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class ChsDecision:
    """Certificate of the two-pullback ampleness test: the curve-side scan
    outcome plus every line-section degree."""

    sense: Literal["ample", "anti-ample"]
    verdict: ChsVerdict
    alpha: AmpDecision
    beta: tuple[tuple[int, Fraction], ...]
    beta_violations: tuple[int, ...]

    @property
    def beta_map(self) -> dict[int, Fraction]:
        return dict(self.beta)

    def to_json_dict(self) -> dict:
        return {
            "sense": self.sense,
            "verdict": self.verdict.value,
            "alpha": self.alpha.to_json_dict(),
            "beta_degrees": {str(i): str(d) for i, d in self.beta},
            "beta_violations": list(self.beta_violations),
        }


def chs_ample(
    H: KDivisor,
    sense: Literal["ample", "anti-ample"] = "ample",
    *,
    all_witnesses: bool = False,
    threads: int | None = None,
) -> ChsDecision:
    """Decide (anti-)ampleness through the two pullbacks.

    The anti-ample test checks negativity directly rather than negating the
    divisor; the two routes agree by linearity of both pullbacks (asserted
    in the test suite), and the direct one keeps the certificate in terms of
    the divisor actually supplied. A passing curve-side scan upgrades to a
    real verdict only within the range where F-positivity is decisive
    (n + 1 <= 7 markings); beyond that the verdict is UNDECIDED. Failures
    are decisive for every n since the scanned inequalities are necessary.
    """
    if sense not in ("ample", "anti-ample"):
        raise ValueError(f"unknown sense {sense!r}")
    alpha = f_positivity(
        pullback_alpha(H),
        "positive" if sense == "ample" else "negative",
        all_witnesses=all_witnesses,
        threads=threads,
    )
    degrees = beta_degrees(H)
    if sense == "ample":
        bad = tuple(i for i, d in degrees if not d > 0)
    else:
        bad = tuple(i for i, d in degrees if not d < 0)
    if alpha.verdict is Verdict.NOT_POSITIVE or bad:
        verdict = ChsVerdict.FAILS
    elif alpha.verdict is Verdict.POSITIVE:
        verdict = ChsVerdict.HOLDS
    else:
        verdict = ChsVerdict.UNDECIDED
    return ChsDecision(sense, verdict, alpha, degrees, bad)
