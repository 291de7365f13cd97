"""Dehn-style shortening for normal closures.

Shared by the small-cancellation and one-relator modules. A *pattern* is a
cyclic word (a relator, or the power ``r^q``); its conjugates are indexed by an
offset in ``0 .. 2|p|-1``: offsets below ``|p|`` rotate ``p``, the rest
rotate ``p^-1``. A step replaces a subword ``s`` of the current word that is
a prefix of some conjugate ``c = s t`` by ``t^-1`` and freely reduces.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

from .words import inverse, is_cyclically_reduced, reduce


@dataclass(frozen=True)
class Step:
    position: int
    relator: int
    offset: int
    length: int


def conjugate(pattern: str, offset: int) -> str:
    n = len(pattern)
    if not 0 <= offset < 2 * n:
        raise ValueError(f"conjugate offset {offset} out of range for length {n}")
    if offset >= n:
        pattern, offset = inverse(pattern), offset - n
    return pattern[offset:] + pattern[:offset]


def min_qualifying_length(threshold) -> int:
    """Smallest integer strictly above a rational threshold."""
    return math.floor(Fraction(threshold)) + 1


class DehnEngine:
    """Iterated replacement with per-pattern exact length thresholds.

    ``thresholds[i]`` is a rational; a subword qualifies for pattern i when
    its length is strictly greater. Tie-breaking: longest subword, then
    leftmost position, then first pattern, then smallest offset.
    """

    def __init__(self, patterns, thresholds):
        self.patterns = list(patterns)
        if len(self.patterns) != len(thresholds):
            raise ValueError("one threshold per pattern")
        for p in self.patterns:
            if not p or not is_cyclically_reduced(p):
                raise ValueError(f"pattern {p!r} must be nonempty and cyclically reduced")
        self.thresholds = [Fraction(t) for t in thresholds]
        self.minimum = [min_qualifying_length(t) for t in self.thresholds]
        for p, lo in zip(self.patterns, self.minimum):
            if 2 * lo <= len(p):
                raise ValueError("threshold must exceed half the pattern length")
        # prefix of qualifying length -> conjugates carrying it, in tie-break order
        self._index: dict[int, dict[str, list[tuple[int, int, str]]]] = {}
        for i, (p, lo) in enumerate(zip(self.patterns, self.minimum)):
            if lo > len(p):
                continue
            table = self._index.setdefault(lo, {})
            for off in range(2 * len(p)):
                c = conjugate(p, off)
                table.setdefault(c[:lo], []).append((i, off, c))

    def find_step(self, w: str) -> Step | None:
        best = None
        best_key = None
        for lo, table in self._index.items():
            for pos in range(len(w) - lo + 1):
                hits = table.get(w[pos : pos + lo])
                if not hits:
                    continue
                for i, off, c in hits:
                    k = lo
                    limit = min(len(c), len(w) - pos)
                    while k < limit and w[pos + k] == c[k]:
                        k += 1
                    key = (-k, pos, i, off)
                    if best_key is None or key < best_key:
                        best_key = key
                        best = Step(pos, i, off, k)
        return best

    def apply(self, w: str, step: Step) -> str:
        c = conjugate(self.patterns[step.relator], step.offset)
        return reduce(w[: step.position] + inverse(c[step.length :]) + w[step.position + step.length :])

    def run(self, w: str) -> tuple[bool, list[Step]]:
        """Shorten until empty or stuck; accepted iff the empty word is reached."""
        w = reduce(w)
        trace = []
        while w:
            step = self.find_step(w)
            if step is None:
                return False, trace
            w = self.apply(w, step)
            trace.append(step)
        return True, trace

    def member(self, w: str) -> bool:
        return self.run(w)[0]

    def __call__(self, w: str) -> bool:
        return self.run(w)[0]


def replay(w: str, trace, patterns, thresholds=None) -> str:
    """Re-apply a trace without any search; returns the final word.

    Each step is validated: the replaced subword must be the stated prefix of
    the stated conjugate and, when thresholds are given, strictly longer than
    the pattern's threshold. A membership certificate replays to ``""``.
    """
    w = reduce(w)
    for step in trace:
        if isinstance(step, dict):
            step = Step(**step)
        p = patterns[step.relator]
        c = conjugate(p, step.offset)
        if not 0 < step.length <= len(c):
            raise ValueError(f"invalid replaced length in {step}")
        if w[step.position : step.position + step.length] != c[: step.length]:
            raise ValueError(f"step {step} does not match the word {w!r}")
        if thresholds is not None and not step.length > Fraction(thresholds[step.relator]):
            raise ValueError(f"step {step} is below the length threshold")
        w = reduce(w[: step.position] + inverse(c[step.length :]) + w[step.position + step.length :])
    return w


def trace_to_json(trace) -> str:
    return json.dumps([asdict(s) for s in trace])


def trace_from_json(text: str) -> list[Step]:
    return [Step(**d) for d in json.loads(text)]
