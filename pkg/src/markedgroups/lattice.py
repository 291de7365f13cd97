"""Subgroups of Z^m: l1 balls, Hermite normal forms, exact covering numbers.

Covering numbers of the space of subgroups of Z^m are computed exactly. Every
restriction ``B(n) ∩ R`` equals ``B(n) ∩ <R ∩ B(n)>``, so it suffices to
enumerate subgroups generated by ball points. Those are found by closing the
trivial subgroup under "adjoin one ball point", deduplicated by HNF.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from ._budget import check_budget
from .metric import BallFingerprint, dim_sequence
from .tables import Table


def l1_sphere_size(m: int, k: int) -> int:
    if k == 0:
        return 1
    return sum(2**j * math.comb(m, j) * math.comb(k - 1, j - 1) for j in range(1, min(m, k) + 1))


def l1_ball_size(m: int, n: int) -> int:
    """``b_n``: lattice points of l1 norm at most n."""
    return sum(2**j * math.comb(m, j) * math.comb(n, j) for j in range(0, min(m, n) + 1))


def _sphere_points(m, k):
    if m == 1:
        return [(-k,), (k,)] if k else [(0,)]
    out = []
    for head in range(-k, k + 1):
        for tail in _sphere_points(m - 1, k - abs(head)):
            out.append((head,) + tail)
    return out


def l1_ball(m: int, n: int, budget: int | None = None) -> list[tuple[int, ...]]:
    """Points of ``B(n)`` ordered by norm, then lexicographically."""
    if m < 1 or n < 0:
        raise ValueError("need m >= 1 and n >= 0")
    check_budget(l1_ball_size(m, n), budget, f"l1 ball(m={m}, n={n})")
    out = []
    for k in range(n + 1):
        out.extend(sorted(_sphere_points(m, k)))
    return out


@dataclass(frozen=True)
class HNFMatrix:
    """Row Hermite normal form of a subgroup of Z^m.

    Rows are echelon with positive pivots, entries above a pivot lie in
    ``[0, pivot)``, and there are no zero rows. Equal subgroups have equal HNFs.
    """

    m: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> list[int]:
        return [next(j for j, x in enumerate(r) if x) for r in self.rows]

    def contains(self, point) -> bool:
        x = list(point)
        if len(x) != self.m:
            raise ValueError("dimension mismatch")
        start = 0
        for row, p in zip(self.rows, self.pivots()):
            if any(x[start:p]):
                return False
            c, rem = divmod(x[p], row[p])
            if rem:
                return False
            if c:
                x = [a - c * b for a, b in zip(x, row)]
            start = p + 1
        return not any(x[start:])

    def to_text(self) -> str:
        lines = [str(self.rank)] + [" ".join(map(str, r)) for r in self.rows]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, m: int | None = None) -> "HNFMatrix":
        lines = [ln.split() for ln in text.splitlines() if ln.strip()]
        rank = int(lines[0][0])
        rows = [tuple(int(v) for v in ln) for ln in lines[1 : 1 + rank]]
        if len(rows) != rank:
            raise ValueError("row count does not match the rank line")
        if m is None:
            if not rows:
                raise ValueError("cannot infer m from an empty matrix")
            m = len(rows[0])
        H = hnf(rows, m)
        if H.rows != tuple(rows):
            raise ValueError("matrix is not in Hermite normal form")
        return H


def hnf(generators, m: int | None = None) -> HNFMatrix:
    """Canonical HNF of the subgroup generated by ``generators``."""
    A = [list(g) for g in generators]
    if m is None:
        if not A:
            raise ValueError("m is required for an empty generator list")
        m = len(A[0])
    if any(len(r) != m for r in A):
        raise ValueError("all generators need m coordinates")
    A = [r for r in A if any(r)]
    r = 0
    for col in range(m):
        while True:
            nz = [i for i in range(r, len(A)) if A[i][col]]
            if not nz:
                break
            piv = min(nz, key=lambda i: (abs(A[i][col]), i))
            A[r], A[piv] = A[piv], A[r]
            clean = True
            for i in range(r + 1, len(A)):
                if A[i][col]:
                    q = A[i][col] // A[r][col]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    clean = clean and not A[i][col]
            if clean:
                break
        if r >= len(A) or not A[r][col]:
            continue
        if A[r][col] < 0:
            A[r] = [-a for a in A[r]]
        for i in range(r):
            q = A[i][col] // A[r][col]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
        r += 1
    return HNFMatrix(m, tuple(tuple(row) for row in A[:r]))


def subgroup_fingerprint(H: HNFMatrix, n: int, budget: int | None = None) -> BallFingerprint:
    ball = l1_ball(H.m, n, budget)
    return BallFingerprint.from_flags(H.m, n, [H.contains(p) for p in ball], space="zm")


def _half_ball(m, n):
    # one representative per {p, -p}; a subgroup contains p iff it contains -p
    return [p for p in l1_ball(m, n) if any(p) and next(x for x in p if x) > 0]


def ball_generated_subgroups(m: int, n: int, budget: int | None = None) -> set[HNFMatrix]:
    """All subgroups generated by subsets of ``B(n)``, as HNFs."""
    check_budget(l1_ball_size(m, n) ** (m + 1), budget, f"subgroups of Z^{m} at radius {n}")
    points = _half_ball(m, n)
    start = hnf([], m)
    seen = {start}
    stack = [start]
    while stack:
        H = stack.pop()
        for p in points:
            if H.contains(p):
                continue
            H2 = hnf(H.rows + (p,), m)
            if H2 not in seen:
                seen.add(H2)
                stack.append(H2)
    return seen


def subset_generated_subgroups(m: int, n: int, max_size: int) -> set[HNFMatrix]:
    """Subgroups generated by at most ``max_size`` ball points."""
    points = _half_ball(m, n)
    out = {hnf([], m)}
    for size in range(1, max_size + 1):
        for T in itertools.combinations(points, size):
            out.add(hnf(T, m))
    return out


def basis_bound(m: int, n: int) -> int:
    """``sum_{l<=m} C(b_n, l)``, the count of subgroups with a basis in the ball."""
    b = l1_ball_size(m, n)
    return sum(math.comb(b, l) for l in range(m + 1))


@dataclass(frozen=True)
class CoverResult:
    m: int
    n: int
    count: int | None
    exact: bool
    bound: int


def covering_number_Zm(
    m: int, n: int, budget: int | None = None, max_exhaustive_m: int = 2
) -> CoverResult:
    """Exact ``N(G(Z^m), 2^-n)``; refuses above ``max_exhaustive_m`` with the bound."""
    if m < 1 or n < 0:
        raise ValueError("need m >= 1 and n >= 0")
    bound = basis_bound(m, n)
    if m > max_exhaustive_m:
        return CoverResult(m, n, None, False, bound)
    subgroups = ball_generated_subgroups(m, n, budget)
    patterns = {subgroup_fingerprint(H, n) for H in subgroups}
    # a ball-generated subgroup is determined by its ball restriction
    assert len(patterns) == len(subgroups)
    return CoverResult(m, n, len(patterns), True, bound)


def zm_dimension_experiment(m: int, n_range, budget: int | None = None, max_exhaustive_m: int = 2):
    """Per-n covering counts for subgroups of Z^m, with ``s_n = log2(N)/n``.

    Returns the table and the finite-window ``DimEstimate`` of the exact counts.
    """
    table = Table(
        f"zm-dim m={m}",
        ["n", "b_n", "N", "exact", "bound", "s_n", "s_bound", "b_n_over_n_m", "vol_K"],
        series={"empirical": "s_n", "upper_bound": "s_bound"},
    )
    counts = []
    vol = 2**m / math.factorial(m)
    for n in n_range:
        if n < 1:
            raise ValueError("dimension rows need n >= 1")
        res = covering_number_Zm(m, n, budget, max_exhaustive_m)
        b = l1_ball_size(m, n)
        s = math.log2(res.count) / n if res.exact else None
        s_bound = (m + 1) * math.log2(b) / n
        table.add(n, b, res.count, res.exact, res.bound, s, s_bound, b / n**m, vol)
        if res.exact:
            counts.append((n, res.count))
    estimate = dim_sequence(counts) if counts else None
    return table, estimate
