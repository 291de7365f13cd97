"""Pieces, the C'(λ) condition, ps(n), and Dehn membership for normal closures.

A piece is a word with two distinct occurrences among the cyclic words of the
relators and their inverses. An occurrence is a (relator, orientation, cyclic
start) triple; an occurrence covering a whole relator is identified by
(relator, orientation) alone, since its start is not meaningful. Relators
that agree up to rotation and inversion count as the same relator.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import partial

from . import words
from ._budget import check_budget
from ._parallel import shard_map
from .dehn import DehnEngine
from .metric import BallFingerprint, dim_sequence, fingerprint_from_predicate
from .tables import Table

MAX_LAMBDA = Fraction(1, 6)


def parse_lambda(text) -> Fraction:
    lam = Fraction(text)
    if lam <= 0:
        raise ValueError("λ must be positive")
    return lam


@dataclass(frozen=True)
class Presentation:
    """Relators over m generators plus the mode driving Dehn thresholds."""

    m: int
    relators: tuple[str, ...]
    mode: str = "smallcancel"
    lam: Fraction | None = None
    q: int | None = None

    def __post_init__(self):
        words.alphabet(self.m)
        rels = tuple(words.reduce(r, self.m) for r in self.relators)
        object.__setattr__(self, "relators", rels)
        for r in rels:
            if not r or not words.is_cyclically_reduced(r):
                raise ValueError(f"relator {r!r} must be nonempty and cyclically reduced")
        if self.mode == "smallcancel":
            if self.lam is None:
                raise ValueError("small-cancellation mode needs λ")
            lam = Fraction(self.lam)
            object.__setattr__(self, "lam", lam)
            if not 0 < lam <= MAX_LAMBDA:
                raise ValueError("λ must lie in (0, 1/6]")
            res = check_c_prime(rels, lam)
            if not res.ok:
                raise ValueError(f"relators violate C'({lam}): piece {res.witness!r}")
        elif self.mode == "onerelator_power":
            if self.q is None or self.q < 2 or len(rels) != 1:
                raise ValueError("power mode needs one root relator and q >= 2")
        else:
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def k(self) -> int:
        return len(self.relators)


def same_cyclic_word(u: str, v: str) -> bool:
    if len(u) != len(v):
        return False
    return v in (u + u) or words.inverse(v) in (u + u)


def _cyclic_subwords(w, length):
    ww = w + w
    return [ww[i : i + length] for i in range(len(w))]


def _self_piece_words(u, length):
    """Words of the given length occurring twice in the cyclic words of u, u^-1."""
    if length >= len(u):
        # u is never a rotation of u^-1 in a free group
        return set()
    seen, dup = set(), set()
    for s in _cyclic_subwords(u, length) + _cyclic_subwords(words.inverse(u), length):
        if s in seen:
            dup.add(s)
        seen.add(s)
    return dup


def _cross_piece_words(u, v, length):
    if length > min(len(u), len(v)):
        return set()
    a = set(_cyclic_subwords(u, length)) | set(_cyclic_subwords(words.inverse(u), length))
    b = set(_cyclic_subwords(v, length)) | set(_cyclic_subwords(words.inverse(v), length))
    return a & b


def pieces_of_length(u: str, v: str, length: int) -> set[str]:
    if same_cyclic_word(u, v):
        return _self_piece_words(u, length)
    return _cross_piece_words(u, v, length)


def _require_cr(*ws):
    for w in ws:
        if not w or not words.is_cyclically_reduced(w):
            raise ValueError(f"{w!r} is not a nonempty cyclically reduced word")


def max_piece_witness(u: str, v: str) -> tuple[int, str | None]:
    """Longest piece between u and v, with a canonical witness word."""
    _require_cr(u, v)
    for length in range(min(len(u), len(v)), 0, -1):
        found = pieces_of_length(u, v, length)
        if found:
            return length, min(found, key=words.canonical_key)
    return 0, None


def max_piece(u: str, v: str) -> int:
    return max_piece_witness(u, v)[0]


@dataclass(frozen=True)
class CPrimeResult:
    ok: bool
    witness: str | None = None
    pair: tuple[int, int] | None = None

    def __bool__(self):
        return self.ok


def forbidden_piece_length(relators, lam) -> int:
    """Shortest piece length that violates C'(λ): ``ceil(λ min|r|)``."""
    bound = Fraction(lam) * min(len(r) for r in relators)
    return math.ceil(bound)


def check_c_prime(relators, lam) -> CPrimeResult:
    """Every piece shorter than λ times the shortest relator, or a witness."""
    relators = list(relators)
    if not relators:
        raise ValueError("C'(λ) needs at least one relator")
    _require_cr(*relators)
    bound = Fraction(lam) * min(len(r) for r in relators)
    worst = None
    for i, j in itertools.combinations_with_replacement(range(len(relators)), 2):
        length, piece = max_piece_witness(relators[i], relators[j])
        if length >= bound and (worst is None or length > len(worst[0])):
            worst = (piece, (i, j))
    if worst is None:
        return CPrimeResult(True)
    return CPrimeResult(False, worst[0], worst[1])


def satisfies_c_prime(relators, lam) -> bool:
    """Fast boolean form of ``check_c_prime``.

    Subwords of pieces are pieces, so it suffices to look for pieces of
    exactly the shortest forbidden length.
    """
    L = forbidden_piece_length(relators, lam)
    for i, j in itertools.combinations_with_replacement(range(len(relators)), 2):
        if pieces_of_length(relators[i], relators[j], L):
            return False
    return True


def _self_ok(u, L):
    if L >= len(u):
        return True
    subs = _cyclic_subwords(u, L) + _cyclic_subwords(words.inverse(u), L)
    return len(set(subs)) == len(subs)


def _ps_single_shard(m, n, L, first):
    layer = words.words_by_length(m, n, first)[n]
    inv = first.swapcase()
    return [w for w in layer if w[-1] != inv and _self_ok(w, L)]


@dataclass
class PsCount:
    m: int
    k: int
    lam: Fraction
    n: int
    count: int
    tuples: list[tuple[str, ...]] | None = None


def enumerate_ps(m, k, lam, n, *, budget=None, keep_tuples=False, threads=1) -> PsCount:
    """Exact size of ps(n): k-tuples of cyc(n) words jointly satisfying C'(λ)."""
    lam = Fraction(lam)
    if k < 0 or n < 1:
        raise ValueError("need k >= 0 and n >= 1")
    if k == 0:
        return PsCount(m, k, lam, n, 1, [()] if keep_tuples else None)
    check_budget(words.count_cyc(m, n) ** k, budget, f"ps(m={m}, k={k}, n={n})")
    L = math.ceil(lam * n)
    singles = [
        w for shard in shard_map(partial(_ps_single_shard, m, n, L), words.alphabet(m), threads) for w in shard
    ]
    if k == 1:
        tuples = [(w,) for w in singles]
    else:
        tuples = []
        for tup in itertools.product(singles, repeat=k):
            if not any(pieces_of_length(tup[i], tup[j], L) for i, j in itertools.combinations(range(k), 2)):
                tuples.append(tup)
    return PsCount(m, k, lam, n, len(tuples), tuples if keep_tuples else None)


def random_cyclically_reduced(rng: random.Random, m: int, n: int) -> str:
    """Uniform draw from cyc(n): uniform reduced word, rejected until cyclically reduced."""
    letters = words.alphabet(m)
    while True:
        w = [rng.choice(letters)]
        for _ in range(n - 1):
            last = w[-1].swapcase()
            w.append(rng.choice([x for x in letters if x != last]))
        if n < 2 or w[0] != w[-1].swapcase():
            return "".join(w)


@dataclass
class PsSample:
    estimate: float
    stderr: float
    seed: int
    samples: int
    hits: int
    density: float


def sample_ps(m, k, lam, n, *, samples, seed) -> PsSample:
    """Monte Carlo estimate of |ps(n)| from uniform k-tuples of cyc(n)."""
    rng = random.Random(seed)
    hits = 0
    for _ in range(samples):
        tup = [random_cyclically_reduced(rng, m, n) for _ in range(k)]
        if k == 0 or satisfies_c_prime(tup, lam):
            hits += 1
    p = hits / samples
    total = words.count_cyc(m, n) ** k
    se = math.sqrt(p * (1 - p) / samples) * total
    return PsSample(p * total, se, seed, samples, hits, p * total / (2 * m - 1) ** (k * n))


def dehn_engine(P: Presentation) -> DehnEngine:
    if P.mode != "smallcancel":
        raise ValueError("Dehn membership needs a small-cancellation presentation")
    if P.lam > MAX_LAMBDA:
        raise ValueError("Dehn's algorithm needs λ <= 1/6")
    keep = 1 - 3 * P.lam
    return DehnEngine(P.relators, [keep * len(r) for r in P.relators])


def dehn_member(w: str, P: Presentation):
    """Decide ``w ∈ <<R>>``; returns ``(accepted, trace)``."""
    return dehn_engine(P).run(words.reduce(w, P.m))


def closure_fingerprint(P: Presentation, n: int, *, budget=None, threads=1) -> BallFingerprint:
    return fingerprint_from_predicate(P.m, n, dehn_engine(P), budget=budget, threads=threads)


def conjugate_products(m, relators, max_factors=2, max_conjugator=3, max_length=12) -> set[str]:
    """Brute-force members of the normal closure.

    Products of at most ``max_factors`` conjugates ``g r^±1 g^-1`` with
    ``|g| <= max_conjugator``, freely reduced, kept when no longer than
    ``max_length``. Uses free reduction only.
    """
    conj = set()
    gs = words.enumerate_ball(m, max_conjugator).words
    for r in relators:
        for s in (r, words.inverse(r)):
            for g in gs:
                conj.add(words.reduce(g + s + words.inverse(g)))
    conj = sorted(conj, key=words.canonical_key)
    out = {""}
    layer = {""}
    for _ in range(max_factors):
        nxt = set()
        for x in layer:
            for c in conj:
                nxt.add(words.reduce(x + c))
        out |= {w for w in nxt if len(w) <= max_length}
        layer = nxt
    return out


def search_relators(m, lam, lengths, count, seed, max_tries=10**7) -> list[str]:
    """Seeded rejection search for single relators satisfying C'(λ)."""
    rng = random.Random(seed)
    lengths = list(lengths)
    found = []
    for _ in range(max_tries):
        w = random_cyclically_reduced(rng, m, rng.choice(lengths))
        if satisfies_c_prime([w], lam) and w not in found:
            found.append(w)
            if len(found) == count:
                return found
    raise RuntimeError(f"found only {len(found)} relators in {max_tries} tries")


def tuple_class(tup) -> tuple[str, ...]:
    """Tuples with equal classes have equal normal closures (rotations, inverses, order)."""
    return tuple(sorted({words.cyclic_class_rep(r) for r in tup}, key=words.canonical_key))


def ps_classes(m, k, lam, n, *, budget=None, threads=1) -> tuple[int, list[tuple[str, ...]]]:
    res = enumerate_ps(m, k, lam, n, budget=budget, keep_tuples=True, threads=threads)
    classes = sorted({tuple_class(t) for t in res.tuples if t}, key=lambda c: [words.canonical_key(r) for r in c])
    return res.count, classes


def class_fingerprint(m, cls, lam, n, threads=1) -> BallFingerprint:
    return closure_fingerprint(Presentation(m, cls, lam=lam), n, threads=threads)


def trivial_fingerprint(m, n) -> BallFingerprint:
    flags = [True] + [False] * (words.free_ball_size(m, n) - 1)
    return BallFingerprint.from_flags(m, n, flags)


def distinguishability(m, k, lam, n, *, budget=None, threads=1) -> dict:
    """Check that distinct closure classes from ps(j), j <= n, differ at radius n."""
    report = {"n": n, "per_length": {}, "classes": 0, "distinct": 0}
    fps = {}
    for j in range(1, n + 1):
        count, classes = ps_classes(m, k, lam, j, budget=budget, threads=threads)
        report["per_length"][j] = (count, len(classes))
        for cls in classes:
            fps[cls] = class_fingerprint(m, cls, lam, n, threads)
    report["classes"] = len(fps)
    report["distinct"] = len(set(fps.values()))
    report["ok"] = report["classes"] == report["distinct"]
    return report


def ps_dimension_experiment(m, k, lam, n_range, *, budget=None, threads=1):
    """Per-n counts for the C'(λ) subspace PS against its two bound lines.

    Columns: ``ps`` = |ps(n)|; ``lower_cert`` = |ps(n)| / (k!(2n)^k);
    ``PS`` = distinct closures of ps(n) (0 marks an empty ps(n)); ``cover``
    = exact N(PS, 2^-n), i.e. distinct radius-n restrictions over ps(j) for
    j <= n/(1-3λ) plus the trivial restriction of the longer relators;
    ``s_n`` = log2(cover)/n, left undefined where ps(n) is empty.
    """
    lam = Fraction(lam)
    n_range = list(n_range)
    n_max = max(n_range)
    lg = math.log2(2 * m - 1)
    lower_line = k * lg
    upper_line = k / (1 - 3 * float(lam)) * lg
    j_max = math.floor(n_max / (1 - 3 * lam))
    counts, classes_by_len = {}, {}
    for j in range(1, j_max + 1):
        counts[j], classes_by_len[j] = ps_classes(m, k, lam, j, budget=budget, threads=threads)
    fp_max = {}
    for j, classes in classes_by_len.items():
        for cls in classes:
            fp_max[cls] = class_fingerprint(m, cls, lam, n_max, threads)
    table = Table(
        f"ps-dim m={m} k={k} lambda={lam}",
        ["n", "ps", "lower_cert", "PS", "cover", "s_n", "lower_line", "upper_line"],
        series={"empirical": "s_n", "lower_bound": lower_line, "upper_bound": upper_line},
    )
    dim_counts = []
    for n in n_range:
        if n < 1:
            raise ValueError("dimension rows need n >= 1")
        ps_n = counts.get(n)
        if ps_n is None:
            ps_n, classes_by_len[n] = ps_classes(m, k, lam, n, budget=budget, threads=threads)
            for cls in classes_by_len[n]:
                fp_max[cls] = class_fingerprint(m, cls, lam, n_max, threads)
        cert = ps_n / (math.factorial(k) * (2 * n) ** k)
        PS = len({fp_max[c].restrict(n) for c in classes_by_len[n]})
        horizon = math.floor(n / (1 - 3 * lam))
        restr = {trivial_fingerprint(m, n)}
        for j in range(1, horizon + 1):
            restr |= {fp_max[c].restrict(n) for c in classes_by_len[j]}
        cover = len(restr)
        s = math.log2(cover) / n if ps_n else None
        table.add(n, ps_n, cert, PS, cover, s, lower_line, upper_line)
        if ps_n:
            dim_counts.append((n, cover))
    estimate = dim_sequence(dim_counts) if dim_counts else None
    return table, estimate
