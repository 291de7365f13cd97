"""Normal closures of q-th powers: Newman shortening and cyclic classes.

For ``<<r^q>>`` with q >= 2 any nontrivial member contains a subword of a
cyclic conjugate of ``r^±q`` longer than ``(q-1)|r|``. That drives the same
shortening engine as the small-cancellation case.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import words
from ._budget import check_budget
from .dehn import DehnEngine
from .metric import BallFingerprint, dim_sequence, fingerprint_from_predicate
from .smallcancel import trivial_fingerprint
from .tables import Table


@dataclass(frozen=True)
class PowerRelator:
    root: str
    q: int

    def __post_init__(self):
        if not self.root or not words.is_cyclically_reduced(self.root):
            raise ValueError(f"root {self.root!r} must be nonempty and cyclically reduced")
        if self.q < 2:
            raise ValueError("Newman's threshold needs q >= 2")

    @property
    def relator(self) -> str:
        return self.root * self.q

    @property
    def threshold(self) -> int:
        return (self.q - 1) * len(self.root)


def newman_engine(pr: PowerRelator) -> DehnEngine:
    return DehnEngine([pr.relator], [pr.threshold])


def newman_member(w: str, pr: PowerRelator):
    """Decide ``w ∈ <<r^q>>``; returns ``(accepted, trace)``."""
    return newman_engine(pr).run(words.reduce(w))


class _ShortCircuit:
    """Newman predicate that skips words too short to hold a long subword."""

    def __init__(self, pr):
        self.engine = newman_engine(pr)
        self.floor = pr.threshold

    def __call__(self, w):
        if not w:
            return True
        if len(w) <= self.floor:
            return False
        return self.engine.member(w)


def power_fingerprint(m: int, pr: PowerRelator, n: int, *, budget=None, threads=1) -> BallFingerprint:
    if n <= pr.threshold:
        # every nonidentity member is longer than (q-1)|r|
        return trivial_fingerprint(m, n)
    return fingerprint_from_predicate(m, n, _ShortCircuit(pr), budget=budget, threads=threads)


def cyclic_classes(ws) -> list[list[str]]:
    """Partition cyclically reduced words under rotation and inversion.

    Classes are listed by their canonical representative (the class minimum),
    members in canonical order.
    """
    groups: dict[str, list[str]] = {}
    for w in ws:
        if not words.is_cyclically_reduced(w):
            raise ValueError(f"{w!r} is not cyclically reduced")
        groups.setdefault(words.cyclic_class_rep(w), []).append(w)
    return [
        sorted(set(groups[rep]), key=words.canonical_key)
        for rep in sorted(groups, key=words.canonical_key)
    ]


def root_classes(m: int, j: int, budget=None, threads=1) -> tuple[int, list[str]]:
    cyc = words.enumerate_cyc(m, j, budget=budget, threads=threads)
    return len(cyc), [c[0] for c in cyclic_classes(cyc)]


def distinct_root_fingerprints(m, q, n, *, budget=None, threads=1) -> dict:
    """Closures of r^q for root classes with |r| <= n/q, compared at radius n."""
    fps = {}
    for j in range(1, n // q + 1):
        _, reps = root_classes(m, j, budget, threads)
        for r in reps:
            fps[r] = power_fingerprint(m, PowerRelator(r, q), n, budget=budget, threads=threads)
    distinct = len(set(fps.values()))
    return {"classes": len(fps), "distinct": distinct, "ok": distinct == len(fps)}


def ur_dimension_experiment(m, q, n_range, *, budget=None, threads=1):
    """Per-n counts for the subspace UR(m, q) against its bound lines.

    Columns: ``cyc`` = |cyc(⌊n/q⌋)|; ``lower_cert`` = |cyc(⌊n/q⌋)|/(2⌊n/q⌋);
    ``classes`` = root classes of cyc(⌊n/q⌋) (exact |UR(⌊n/q⌋)|);
    ``distinct`` = distinct radius-n closures over roots of length <= n/q;
    ``cover`` = exact N(UR, 2^-n) over roots of length <= n/(q-1) plus the
    trivial restriction; ``s_n`` = log2(cover)/n. Rows with ⌊n/q⌋ = 0 keep
    their place with NA markers.
    """
    if q < 2:
        raise ValueError("q must be >= 2")
    n_range = list(n_range)
    n_max = max(n_range)
    lg = math.log2(2 * m - 1)
    lower_line, upper_line = lg / q, lg / (q - 1)
    j_max = n_max // (q - 1)
    cyc_count, reps = {}, {}
    for j in range(1, j_max + 1):
        check_budget(words.sphere_size(m, j), budget, f"cyc(m={m}, n={j})")
        cyc_count[j], reps[j] = root_classes(m, j, budget, threads)
    fp_max = {}
    for j in range(1, j_max + 1):
        for r in reps[j]:
            fp_max[r] = power_fingerprint(m, PowerRelator(r, q), n_max, budget=budget, threads=threads)
    table = Table(
        f"ur-dim m={m} q={q}",
        ["n", "floor_n_q", "cyc", "lower_cert", "classes", "distinct", "cover", "s_n", "lower_line", "upper_line"],
        series={"empirical": "s_n", "lower_bound": lower_line, "upper_bound": upper_line},
    )
    dim_counts = []
    for n in n_range:
        if n < 1:
            raise ValueError("dimension rows need n >= 1")
        f = n // q
        low = {fp_max[r].restrict(n) for j in range(1, f + 1) for r in reps[j]}
        cover = {trivial_fingerprint(m, n)}
        for j in range(1, n // (q - 1) + 1):
            cover |= {fp_max[r].restrict(n) for r in reps[j]}
        s = math.log2(len(cover)) / n
        if f == 0:
            table.add(n, 0, None, None, None, len(low), len(cover), s, lower_line, upper_line)
        else:
            table.add(n, f, cyc_count[f], cyc_count[f] / (2 * f), len(reps[f]), len(low), len(cover), s,
                      lower_line, upper_line)
        dim_counts.append((n, len(cover)))
    return table, dim_sequence(dim_counts)
