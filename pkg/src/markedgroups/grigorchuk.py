"""Grigorchuk's oracle algorithm on words over {a, b, c, d}.

Words are first brought to the reduced positive form ``r(w)`` in
``Γ = <a,b,c,d | a² = b² = c² = d² = bcd = 1>``. A word with even
a-exponent-sum and ``|r(w)| >= 2`` is split into two shorter words by the
parity substitutions, using the next triple of the oracle sequence; it is
accepted iff every branch ends in the empty word.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from . import words
from ._budget import BudgetExceeded, check_budget, default_budget
from .metric import BallFingerprint, fingerprint_from_predicate

LETTERS = "abcd"
GRIG_ALPHABET = "aAbBcCdD"
# oracle symbol -> images of (b, c, d); "" is the identity
TRIPLES = {"0": ("a", "a", ""), "1": ("a", "", "a"), "2": ("", "a", "a")}
_THIRD = {frozenset("bc"): "d", frozenset("bd"): "c", frozenset("cd"): "b"}
_ORACLE_RE = re.compile(r"^([012]+)(?:\(([012])\)\*)?$")


@dataclass(frozen=True)
class OracleSeq:
    """Finite prefix over {0, 1, 2} followed by a repeated tail symbol."""

    prefix: str
    tail: str

    def __post_init__(self):
        if not self.prefix or set(self.prefix) - set("012"):
            raise ValueError("oracle prefix must be a nonempty string over 0, 1, 2")
        if self.tail not in TRIPLES:
            raise ValueError("oracle tail must be one of 0, 1, 2")

    @classmethod
    def parse(cls, text: str) -> "OracleSeq":
        """``"012(0)*"``; without a tail marker the last symbol repeats."""
        m = _ORACLE_RE.match("".join(text.split()))
        if not m:
            raise ValueError(f"malformed oracle sequence {text!r}")
        prefix, tail = m.group(1), m.group(2)
        return cls(prefix, tail if tail is not None else prefix[-1])

    def symbol(self, i: int) -> str:
        """0-based coordinate; the first coordinate drives the root split."""
        return self.prefix[i] if i < len(self.prefix) else self.tail

    def triple(self, i: int) -> tuple[str, str, str]:
        return TRIPLES[self.symbol(i)]

    def head(self, n: int) -> str:
        return "".join(self.symbol(i) for i in range(n))

    def __str__(self):
        return f"{self.prefix}({self.tail})*"


def _check(w):
    bad = set(w) - set(GRIG_ALPHABET)
    if bad:
        raise ValueError(f"letters {sorted(bad)} outside a, b, c, d and inverses")


def _reduce_stack(w):
    st = []
    for x in w.lower():
        if st and st[-1] == x:
            st.pop()
        elif st and x != "a" and st[-1] != "a":
            st.append(_THIRD[frozenset((st.pop(), x))])
        else:
            st.append(x)
    return "".join(st)


def _redex(w, i):
    """Rewrite for the shortest redex starting at position i, or None."""
    x = w[i]
    if x.isupper():
        return w[:i] + x.lower() + w[i + 1 :]
    if i + 1 < len(w):
        y = w[i + 1]
        if y == x:
            return w[:i] + w[i + 2 :]
        if y.islower() and x != "a" and y != "a":
            return w[:i] + _THIRD[frozenset((x, y))] + w[i + 2 :]
    return None


def _reduce_scan(w, positions):
    while True:
        for i in positions(len(w)):
            nxt = _redex(w, i)
            if nxt is not None:
                w = nxt
                break
        else:
            return w


def gamma_reduce(w: str, strategy: str = "stack") -> str:
    """Reduced positive form ``r(w)``: no inverses, no squares, no adjacent {b,c,d} pair.

    ``strategy`` selects how rules are applied: ``"stack"`` (single pass),
    ``"leftmost"`` or ``"rightmost"`` (one elementary rewrite at a time).
    """
    _check(w)
    if strategy == "stack":
        return _reduce_stack(w)
    if strategy == "leftmost":
        return _reduce_scan(w, lambda n: range(n))
    if strategy == "rightmost":
        return _reduce_scan(w, lambda n: range(n - 1, -1, -1))
    raise ValueError(f"unknown strategy {strategy!r}")


def a_exponent_sum(w: str) -> int:
    return w.count("a") - w.count("A")


def phi(w: str, i: int, triple) -> str:
    """Parity substitution: letters after an even (i=0) or odd (i=1) number of a's map through the triple."""
    if set(w) - set(LETTERS):
        raise ValueError("phi takes a positive word over a, b, c, d")
    if w.count("a") % 2:
        raise ValueError("phi needs an even number of a's")
    if i not in (0, 1):
        raise ValueError("branch index must be 0 or 1")
    image = dict(zip("bcd", triple))
    out = []
    parity = 0
    for x in w:
        if x == "a":
            parity ^= 1
        elif parity == i:
            out.append(image[x])
        else:
            out.append(x)
    return "".join(out)


@dataclass
class Node:
    word: str
    depth: int
    rule: str
    accepted: bool
    children: list["Node"] = field(default_factory=list)

    def height(self) -> int:
        return 1 + max((c.height() for c in self.children), default=0)

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass
class MembershipVerdict:
    accepted: bool
    tree: Node

    @property
    def depth(self) -> int:
        return max(n.depth for n in self.tree.walk())


def _decide(w, omega, depth):
    if a_exponent_sum(w) % 2:
        return Node(w, depth, "odd-a-sum", False)
    r = gamma_reduce(w)
    if not r:
        return Node(w, depth, "trivial", True)
    if len(r) == 1:
        return Node(w, depth, "length-1", False)
    t = omega.triple(depth)
    kids = [_decide(phi(r, i, t), omega, depth + 1) for i in (0, 1)]
    return Node(w, depth, "split", all(k.accepted for k in kids), kids)


def member(w: str, omega: OracleSeq) -> MembershipVerdict:
    """Run the oracle algorithm; both branches of every split must accept."""
    _check(w)
    root = _decide(w, omega, 0)
    return MembershipVerdict(root.accepted, root)


class GrigMembership:
    """Cached verdict-only predicate; the verdict depends only on ``r(w)``."""

    def __init__(self, omega: OracleSeq):
        self.omega = omega
        self._cache: dict[tuple[str, int], bool] = {}

    def _accept(self, r, depth):
        # r is already reduced and has an even number of a's
        if not r:
            return True
        if len(r) == 1:
            return False
        key = (r, depth)
        hit = self._cache.get(key)
        if hit is None:
            t = self.omega.triple(depth)
            hit = True
            for i in (0, 1):
                child = _reduce_stack(phi(r, i, t))
                if child.count("a") % 2 or not self._accept(child, depth + 1):
                    hit = False
                    break
            self._cache[key] = hit
        return hit

    def __call__(self, w: str) -> bool:
        if a_exponent_sum(w) % 2:
            return False
        return self._accept(_reduce_stack(w), 0)


def fingerprint_S(omega: OracleSeq, L: int, *, budget=None, threads=1) -> BallFingerprint:
    """Membership bitmap over the free group on a, b, c, d up to length L."""
    return fingerprint_from_predicate(4, L, GrigMembership(omega), budget=budget, threads=threads)


def separating_word(omega1, omega2, max_length, limit=None) -> str | None:
    """First word (canonical order, length <= max_length) with different verdicts.

    At most ``limit`` words are examined; None means none was found among them.
    """
    p1, p2 = GrigMembership(omega1), GrigMembership(omega2)
    for w in itertools.islice(words.iter_ball(4, max_length), limit):
        if p1(w) != p2(w):
            return w
    return None


def common_prefix(omega1: OracleSeq, omega2: OracleSeq, n: int) -> int:
    k = 0
    while k < n and omega1.symbol(k) == omega2.symbol(k):
        k += 1
    return k


def verify_prop62(omega1, omega2, n, *, budget=None, threads=1) -> dict:
    """Check the two Cantor-set statements for a pair of oracles.

    Prefixes equal on the first n symbols: the fingerprints must agree up to
    length 2^n. Prefixes differing within the first n: a separating word of
    length <= 2^(n+2) is searched for in canonical order (reported, or None
    when not found within ``budget`` words).
    """
    agree = common_prefix(omega1, omega2, n)
    report = {"n": n, "agree": agree, "prefixes_match": agree == n}
    if agree == n:
        L = 2**n
        f1 = fingerprint_S(omega1, L, budget=budget, threads=threads)
        f2 = fingerprint_S(omega2, L, budget=budget, threads=threads)
        report.update(check="i", length=L, holds=f1 == f2)
    else:
        L = 2 ** (n + 2)
        limit = min(words.free_ball_size(4, L), budget if budget is not None else default_budget())
        found = separating_word(omega1, omega2, L, limit)
        report.update(check="ii", length=L, separating_word=found, holds=found is not None)
    return report


def center_sequences(n: int) -> list[OracleSeq]:
    """Oracles constant from coordinate n on (3^n of them; the 3 constants when n = 0)."""
    if n == 0:
        return [OracleSeq(t, t) for t in "012"]
    out = []
    for head in itertools.product("012", repeat=n - 1):
        for t in "012":
            out.append(OracleSeq("".join(head) + t, t))
    return out


def covering_estimate_B(n: int, *, budget=None, threads=1) -> dict:
    """The 3^n cover of Grigorchuk's Cantor set at scale 2^-2^n.

    When the budget allows, the centers' fingerprints at length 2^n are
    computed and counted, and every oracle p + (t)* with |p| = n is checked
    to share its fingerprint with some center.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    bound = 3**n
    report = {"n": n, "bound": bound, "observed": None, "covered": None}
    L = 2**n
    centers = center_sequences(n)
    others = [OracleSeq("".join(p) + t, t) for p in itertools.product("012", repeat=n) for t in "012"] if n else []
    try:
        check_budget(words.free_ball_size(4, L) * (len(centers) + len(others)), budget, "3^n cover check")
    except BudgetExceeded:
        return report
    fps = {fingerprint_S(c, L, threads=threads) for c in centers}
    report["observed"] = len(fps)
    report["covered"] = all(fingerprint_S(o, L, threads=threads) in fps for o in others)
    return report
