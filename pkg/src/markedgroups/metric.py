"""Ultrametric on subsets of a finitely generated group, via ball fingerprints.

A subset X is only ever handled through ``X ∩ B(n)`` for an explicit radius
n, stored as a bitmap over the canonical ball order. Because that order is
length-first, the radius-k restriction of a fingerprint is a bit prefix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial

import numpy as np

from . import words
from ._budget import check_budget
from ._parallel import shard_map

SPACES = ("free", "zm")


def sphere_sizes(space: str, m: int, n: int) -> list[int]:
    """Element counts of the length-k spheres, k = 0..n."""
    if space == "free":
        return [words.sphere_size(m, k) for k in range(n + 1)]
    if space == "zm":
        from .lattice import l1_sphere_size

        return [l1_sphere_size(m, k) for k in range(n + 1)]
    raise ValueError(f"unknown space {space!r}")


def space_ball_size(space: str, m: int, n: int) -> int:
    return sum(sphere_sizes(space, m, n))


def _pack(flags) -> bytes:
    return np.packbits(np.asarray(flags, dtype=bool), bitorder="little").tobytes()


def _unpack(bits: bytes, size: int) -> np.ndarray:
    arr = np.frombuffer(bits, dtype=np.uint8)
    return np.unpackbits(arr, count=size, bitorder="little").astype(bool)


@dataclass(frozen=True)
class BallFingerprint:
    """Membership bitmap of a set restricted to the radius-``n`` ball."""

    m: int
    n: int
    bits: bytes
    space: str = "free"
    size: int = field(default=-1, compare=False)

    def __post_init__(self):
        if self.space not in SPACES:
            raise ValueError(f"unknown space {self.space!r}")
        expected = space_ball_size(self.space, self.m, self.n)
        if self.size == -1:
            object.__setattr__(self, "size", expected)
        if self.size != expected or len(self.bits) != (expected + 7) // 8:
            raise ValueError("bitmap length does not match the ball size")
        tail = expected % 8
        if tail and self.bits[-1] >> tail:
            raise ValueError("padding bits must be zero")

    @classmethod
    def from_flags(cls, m, n, flags, space="free"):
        return cls(m, n, _pack(flags), space)

    @classmethod
    def from_set(cls, m, n, members, space="free"):
        """Fingerprint of an explicit finite set of ball elements."""
        if space == "free":
            ball = words.enumerate_ball(m, n).words
            members = {words.reduce(w, m) for w in members}
        else:
            from .lattice import l1_ball

            ball = l1_ball(m, n)
            members = {tuple(p) for p in members}
        return cls.from_flags(m, n, [w in members for w in ball], space)

    @property
    def beta(self) -> int:
        return self.size

    def flags(self) -> np.ndarray:
        return _unpack(self.bits, self.size)

    def members(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.flags())]

    def restrict(self, k: int) -> "BallFingerprint":
        if not 0 <= k <= self.n:
            raise ValueError(f"cannot restrict radius {self.n} fingerprint to {k}")
        if k == self.n:
            return self
        size = space_ball_size(self.space, self.m, k)
        return BallFingerprint(self.m, k, _pack(self.flags()[:size]), self.space)

    def to_hex(self) -> str:
        return self.bits.hex()

    @classmethod
    def from_hex(cls, m, n, text, space="free"):
        return cls(m, n, bytes.fromhex(text.strip()), space)


def _ball_shard(m, n, predicate, first):
    layers = words.words_by_length(m, n, first)
    return [[bool(predicate(w)) for w in layer] for layer in layers]


def fingerprint_from_predicate(m, n, predicate, *, budget=None, threads=1):
    """Evaluate a membership predicate over the whole free-group ball.

    Work is sharded by first letter and merged per length, so the bitmap is
    identical for any thread count. ``predicate`` must be picklable when
    ``threads > 1``.
    """
    check_budget(words.free_ball_size(m, n), budget, f"fingerprint(m={m}, n={n})")
    shards = shard_map(partial(_ball_shard, m, n, predicate), words.alphabet(m), threads)
    flags = [bool(predicate(""))]
    for k in range(1, n + 1):
        for shard in shards:
            flags.extend(shard[k])
    return BallFingerprint.from_flags(m, n, flags)


@dataclass(frozen=True)
class Valuation:
    """Largest agreement radius, or infinity when equal up to ``probe``."""

    value: float
    probe: int

    @property
    def infinite(self) -> bool:
        return self.value == math.inf

    @property
    def distance(self) -> Fraction:
        # value is -1 when the sets already differ at the identity
        return Fraction(0) if self.infinite else Fraction(2) ** -int(self.value)

    def describe_distance(self) -> str:
        if self.infinite:
            return f"<= 2^-{self.probe}"
        return str(self.distance)


def _as_fingerprint(x, m, probe, space):
    if isinstance(x, BallFingerprint):
        return x
    if m is None or probe is None:
        raise ValueError("sets and oracles need m and a probe radius")
    if callable(x):
        if space != "free":
            raise ValueError("oracle fingerprints are only built over free groups")
        return fingerprint_from_predicate(m, probe, x)
    return BallFingerprint.from_set(m, probe, x, space)


def valuation(A, B, *, m=None, probe=None, space="free") -> Valuation:
    """Largest n with ``A ∩ B(n) = B ∩ B(n)``.

    A and B are fingerprints at a common radius, finite sets, or membership
    predicates (the latter two need ``m`` and ``probe``).
    """
    A = _as_fingerprint(A, m, probe, space)
    B = _as_fingerprint(B, m, probe, space)
    if (A.m, A.space) != (B.m, B.space):
        raise ValueError("fingerprints live in different spaces")
    if A.n != B.n:
        raise ValueError(f"incomparable radii {A.n} and {B.n}")
    diff = np.flatnonzero(A.flags() != B.flags())
    if diff.size == 0:
        return Valuation(math.inf, A.n)
    first = int(diff[0])
    total = 0
    for radius, count in enumerate(sphere_sizes(A.space, A.m, A.n)):
        total += count
        if first < total:
            return Valuation(radius - 1, A.n)
    raise AssertionError("unreachable")


def distance(A, B, **kwargs) -> Fraction:
    """``2^-ν(A, B)``; zero means equal up to the probe radius."""
    return valuation(A, B, **kwargs).distance


def covering_number(family, n: int) -> int:
    """Number of distinct radius-``n`` restrictions.

    In this ultrametric the closed 2^-n balls around these restrictions form
    the unique minimal cover, so this is also the packing number.
    """
    seen = set()
    for fp in family:
        if fp.n < n:
            raise ValueError(f"fingerprint of radius {fp.n} is below {n}")
        seen.add(fp.restrict(n))
    return len(seen)


def greedy_packing_number(family, n: int) -> int:
    """Greedy maximal set of pairwise 2^-n-distinguishable points.

    Independent of ``covering_number``: it only uses pairwise distances.
    """
    eps = Fraction(1, 2**n)
    chosen = []
    for fp in family:
        if all(distance(fp, c) > eps for c in chosen):
            chosen.append(fp)
    return len(chosen)


@dataclass
class DimEstimate:
    """Box-counting estimates ``s_n = log2(N_n) / n`` over a finite window.

    ``liminf``/``limsup`` are min/max of ``s_n`` over the trailing window, a
    finite-window estimate and not a limit.
    """

    rows: list[tuple[int, int, float | None]]
    window: tuple[int, int] | None
    liminf: float | None
    limsup: float | None

    def to_tsv(self) -> str:
        lines = ["n\tN\ts_n"]
        for n, N, s in self.rows:
            lines.append(f"{n}\t{N}\t{fmt_float(s)}")
        return "\n".join(lines) + "\n"


def fmt_float(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "NA"
    return f"{x:.6g}"


def dim_sequence(counts, window: int | None = None) -> DimEstimate:
    """Turn ``(n, N_n)`` pairs into ``s_n`` values plus a trailing-window summary.

    ``N_n = 0`` marks an empty family; its ``s_n`` is undefined (None).
    The default window is the top half of the computed n-range.
    """
    counts = sorted(counts)
    if not counts:
        raise ValueError("dim_sequence needs at least one (n, N) pair")
    rows = []
    for n, N in counts:
        if N < 0:
            raise ValueError("counts must be non-negative")
        s = math.log2(N) / n if N >= 1 and n >= 1 else None
        rows.append((n, N, s))
    if window is None:
        window = max(1, (len(rows) + 1) // 2)
    tail = [r for r in rows[-window:] if r[2] is not None]
    if not tail:
        return DimEstimate(rows, None, None, None)
    vals = [r[2] for r in tail]
    return DimEstimate(rows, (tail[0][0], tail[-1][0]), min(vals), max(vals))


def growth_stats(m: int, n_max: int, budget: int | None = None):
    """Rows ``(n, beta(n), sigma(n), beta(n)/n, beta(n)^(1/n))`` for n = 1..n_max."""
    if m < 2:
        raise ValueError("growth_stats needs m >= 2")
    check_budget(n_max, budget, "growth table")
    rows = []
    for n in range(1, n_max + 1):
        beta = words.ball_size(m, n)
        sigma = words.ball_size(m, n + 1) - beta
        rows.append((n, beta, sigma, beta / n, math.exp(math.log(beta) / n)))
    return rows


def read_fingerprints(text: str) -> list[BallFingerprint]:
    """Parse the fingerprint file format.

    First line ``m n beta [space]``, then one hex bitmap per line.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty fingerprint file")
    head = lines[0].split()
    if len(head) not in (3, 4):
        raise ValueError("header must be 'm n beta [space]'")
    m, n, beta = (int(x) for x in head[:3])
    space = head[3] if len(head) == 4 else "free"
    out = [BallFingerprint.from_hex(m, n, ln, space) for ln in lines[1:]]
    for fp in out:
        if fp.beta != beta:
            raise ValueError("header beta does not match the ball size")
    return out


def write_fingerprints(fps) -> str:
    fps = list(fps)
    if not fps:
        raise ValueError("nothing to write")
    first = fps[0]
    if any((fp.m, fp.n, fp.space) != (first.m, first.n, first.space) for fp in fps):
        raise ValueError("all fingerprints in a file share m, n and space")
    head = f"{first.m} {first.n} {first.beta}"
    if first.space != "free":
        head += f" {first.space}"
    return "\n".join([head] + [fp.to_hex() for fp in fps]) + "\n"
