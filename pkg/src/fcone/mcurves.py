"""Divisor classes on the moduli space of stable m-pointed rational curves,
written in the boundary basis, and the F-curve positivity scan.

A class is stored as exact rational coefficients on canonical subset keys:

* a key of size 2..m-2 holds the coefficient of the boundary divisor
  attached to the split {S, S^c} (the two sides name the same divisor, so
  the canonical representative of the pair is used);
* a singleton key {i} holds the coefficient c with the sign convention that
  the stored class is c * (-psi_i). Equivalently, writing H = sum c_S D_S
  over all keys, singletons extend the boundary notation by D_{i} := -psi_i.

An F-curve is indexed by a partition of the labels into four nonempty
blocks I|J|K|L, and meets H in

    c(I+J) + c(I+K) + c(I+L) - c(I) - c(J) - c(K) - c(L),

all lookups going through canonical keys. Strict positivity of these
numbers characterises ample classes for m <= 7 (Keel-McKernan); for larger
m it is necessary but the sufficiency is open, and the verdict says so.
"""

from __future__ import annotations

import enum
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Literal, Mapping, Sequence

from .combinat import FourPartition, Subset, canonical_key, enumerate_four_partitions
from .rationals import RationalLike, as_rational

__all__ = [
    "FULTON_MAX_MARKINGS",
    "MDivisor",
    "FValue",
    "Verdict",
    "AmpDecision",
    "m_linear_combine",
    "f_curve_value",
    "f_positivity",
]

# largest number of markings for which F-positivity is known to imply ampleness
FULTON_MAX_MARKINGS = 7

KeyLike = Subset | Iterable[int]


def _as_key(key: KeyLike, m: int) -> Subset:
    if isinstance(key, Subset):
        if key.m != m:
            raise ValueError(f"key ambient {key.m} does not match divisor m={m}")
        return key
    return Subset.from_labels(key, m)


@dataclass(frozen=True)
class MDivisor:
    """Exact divisor class on the m-pointed space; treat as immutable."""

    m: int
    coeffs: Mapping[Subset, Fraction]

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        clean: dict[Subset, Fraction] = {}
        for key, value in self.coeffs.items():
            S = _as_key(key, self.m)
            if S.size == 0 or S.size == S.m:
                raise ValueError(f"empty or full key {S!r} is not a divisor class")
            if S.size >= 2 and self.m < 4:
                raise ValueError(f"boundary key {S} needs m >= 4")
            S = canonical_key(S)
            q = as_rational(value)
            if q:
                clean[S] = clean.get(S, Fraction(0)) + q
        object.__setattr__(
            self, "coeffs", {k: v for k, v in clean.items() if v != 0}
        )

    @classmethod
    def zero(cls, m: int) -> "MDivisor":
        return cls(m, {})

    @classmethod
    def delta(cls, labels: Iterable[int], m: int) -> "MDivisor":
        """Unit coefficient on the boundary divisor split off by ``labels``."""
        return cls(m, {Subset.from_labels(labels, m): Fraction(1)})

    @classmethod
    def psi(cls, i: int, m: int) -> "MDivisor":
        """The cotangent class psi_i, i.e. coefficient -1 on the key {i}."""
        return cls(m, {Subset.from_labels([i], m): Fraction(-1)})

    def coefficient(self, key: KeyLike) -> Fraction:
        S = canonical_key(_as_key(key, self.m))
        return self.coeffs.get(S, Fraction(0))

    def support(self) -> list[Subset]:
        return sorted(self.coeffs, key=Subset.sort_key)

    def is_zero(self) -> bool:
        return not self.coeffs

    def relabel(self, sigma: Sequence[int]) -> "MDivisor":
        return MDivisor(self.m, {S.relabel(sigma): q for S, q in self.coeffs.items()})

    def __add__(self, other: "MDivisor") -> "MDivisor":
        return m_linear_combine([(1, self), (1, other)])

    def __sub__(self, other: "MDivisor") -> "MDivisor":
        return m_linear_combine([(1, self), (-1, other)])

    def __neg__(self) -> "MDivisor":
        return m_linear_combine([(-1, self)])

    def __rmul__(self, scalar: RationalLike) -> "MDivisor":
        return m_linear_combine([(scalar, self)])

    __mul__ = __rmul__

    def to_json_dict(self) -> dict:
        """Wire format: {"m":…, "psi":{"i": q}, "delta":{"a,b,c": q}}.

        A "psi" entry records the coefficient on the singleton key {i}, so
        the class q*(-psi_i) serialises as "psi":{"i": str(q)}.
        """
        psi: dict[str, str] = {}
        delta: dict[str, str] = {}
        for S in self.support():
            if S.size == 1:
                psi[str(S.labels[0])] = str(self.coeffs[S])
            else:
                delta[str(S)] = str(self.coeffs[S])
        return {"m": self.m, "psi": psi, "delta": delta}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "MDivisor":
        m = data.get("m")
        if not isinstance(m, int):
            raise ValueError("MDivisor JSON needs an integer 'm'")
        coeffs: dict[Subset, Fraction] = {}
        for lab, q in dict(data.get("psi", {})).items():
            S = Subset.from_labels([int(lab)], m)
            coeffs[S] = coeffs.get(S, Fraction(0)) + as_rational(q)
        for key, q in dict(data.get("delta", {})).items():
            S = canonical_key(Subset.parse(key, m))
            coeffs[S] = coeffs.get(S, Fraction(0)) + as_rational(q)
        return cls(m, coeffs)


def m_linear_combine(
    terms: Sequence[tuple[RationalLike, MDivisor]]
) -> MDivisor:
    """Exact coefficient-wise combination sum(scalar * divisor)."""
    if not terms:
        raise ValueError("need at least one term")
    m = terms[0][1].m
    acc: dict[Subset, Fraction] = {}
    for scalar, div in terms:
        if div.m != m:
            raise ValueError(f"mixed ambient sizes {m} and {div.m}")
        c = as_rational(scalar)
        if not c:
            continue
        for S, q in div.coeffs.items():
            acc[S] = acc.get(S, Fraction(0)) + c * q
    return MDivisor(m, acc)


@dataclass(frozen=True)
class FValue:
    """The intersection number of a divisor with one F-curve."""

    partition: FourPartition
    value: Fraction


def f_curve_value(H: MDivisor, P: FourPartition) -> Fraction:
    """Intersection of H with the F-curve of partition P (exact rational)."""
    if P.m != H.m:
        raise ValueError(f"partition on {P.m} labels vs divisor on {H.m}")
    I, J, K, L = P.parts
    total = Fraction(0)
    for other in (J, K, L):
        total += H.coefficient(I.union(other))
    for part in P.parts:
        total -= H.coefficient(part)
    return total


class Verdict(enum.Enum):
    POSITIVE = "positive"
    NOT_POSITIVE = "not-positive"
    POSITIVE_BUT_UNDECIDED = "positive-but-undecided-ampleness"


@dataclass(frozen=True)
class AmpDecision:
    """Outcome of the full F-curve scan.

    POSITIVE means every F-value satisfied the tested inequality and the
    marking count is within the range where that settles (anti-)ampleness;
    POSITIVE_BUT_UNDECIDED means the scan passed but m exceeds that range.
    """

    verdict: Verdict
    sense: Literal["positive", "negative"]
    strict: bool
    witness: FourPartition | None = None
    witness_value: Fraction | None = None
    violations: tuple[FValue, ...] = ()

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.POSITIVE

    def to_json_dict(self) -> dict:
        out: dict = {
            "verdict": self.verdict.value,
            "sense": self.sense,
            "strict": self.strict,
        }
        if self.witness is not None:
            out["witness"] = str(self.witness)
            out["witness_value"] = str(self.witness_value)
        if self.violations:
            out["violations"] = [
                {"partition": str(v.partition), "value": str(v.value)}
                for v in self.violations
            ]
        return out


def _satisfies(sense: str, strict: bool) -> Callable[[Fraction], bool]:
    if sense == "positive":
        return (lambda v: v > 0) if strict else (lambda v: v >= 0)
    if sense == "negative":
        return (lambda v: v < 0) if strict else (lambda v: v <= 0)
    raise ValueError(f"unknown sense {sense!r}")


def _scan_chunk(
    H: MDivisor,
    chunk: Sequence[tuple[int, FourPartition]],
    ok: Callable[[Fraction], bool],
    all_witnesses: bool,
) -> list[tuple[int, FValue]]:
    hits: list[tuple[int, FValue]] = []
    for idx, P in chunk:
        v = f_curve_value(H, P)
        if not ok(v):
            hits.append((idx, FValue(P, v)))
            if not all_witnesses:
                break
    return hits


def f_positivity(
    H: MDivisor,
    sense: Literal["positive", "negative"],
    *,
    strict: bool = True,
    all_witnesses: bool = False,
    threads: int | None = None,
) -> AmpDecision:
    """Scan every F-curve; report the first violation in enumeration order.

    ``threads`` > 1 splits the scan into chunks reduced deterministically by
    minimum enumeration index, so the witness never depends on scheduling.
    """
    if H.m < 4:
        raise ValueError(f"no F-curves on m={H.m} < 4 markings")
    ok = _satisfies(sense, strict)
    indexed = list(enumerate(enumerate_four_partitions(H.m)))
    if threads and threads > 1:
        nchunks = min(threads, len(indexed))
        chunks = [indexed[i::nchunks] for i in range(nchunks)]
        with ThreadPoolExecutor(max_workers=nchunks) as pool:
            parts = pool.map(
                lambda ch: _scan_chunk(H, ch, ok, all_witnesses), chunks
            )
            hits = sorted(itertools.chain.from_iterable(parts), key=lambda t: t[0])
    else:
        hits = _scan_chunk(H, indexed, ok, all_witnesses)
    if hits:
        first = hits[0][1]
        return AmpDecision(
            Verdict.NOT_POSITIVE,
            sense,
            strict,
            witness=first.partition,
            witness_value=first.value,
            violations=tuple(v for _, v in hits) if all_witnesses else (),
        )
    verdict = (
        Verdict.POSITIVE
        if H.m <= FULTON_MAX_MARKINGS
        else Verdict.POSITIVE_BUT_UNDECIDED
    )
    return AmpDecision(verdict, sense, strict)
