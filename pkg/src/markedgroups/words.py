"""Free-group words over m generators.

A word is a plain ``str``: lowercase letter ``a``, ``b``, ... is the i-th
generator and the uppercase letter is its inverse. Every word handed out by
this module is freely reduced; the empty string is the identity.

Canonical order is length first, then lexicographic with the letter order
``a < A < b < B < ...``. Ball and fingerprint layouts depend on it.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import partial

from ._budget import check_budget
from ._parallel import shard_map

MAX_GENERATORS = 26


def alphabet(m: int) -> str:
    """Letters of the free group of rank ``m`` in canonical order."""
    if not 1 <= m <= MAX_GENERATORS:
        raise ValueError(f"generator count must lie in 1..{MAX_GENERATORS}, got {m}")
    out = []
    for i in range(m):
        x = chr(ord("a") + i)
        out.append(x)
        out.append(x.upper())
    return "".join(out)


_ORDER = {x: chr(0x100 + i) for i, x in enumerate(alphabet(MAX_GENERATORS))}
_ORDER_TABLE = str.maketrans(_ORDER)


def canonical_key(w: str):
    return (len(w), w.translate(_ORDER_TABLE))


@dataclass(frozen=True)
class FreeAlphabet:
    m: int

    def __post_init__(self):
        alphabet(self.m)

    @property
    def letters(self) -> str:
        return alphabet(self.m)

    def inverse(self, x: str) -> str:
        return x.swapcase()

    def index(self, x: str) -> int:
        """Signed generator index of a letter: ``a -> 1``, ``A -> -1``."""
        i = ord(x.lower()) - ord("a") + 1
        if not (x.isalpha() and x.isascii() and 1 <= i <= self.m):
            raise ValueError(f"letter {x!r} outside the alphabet of rank {self.m}")
        return i if x.islower() else -i

    def letter(self, i: int) -> str:
        if i == 0 or abs(i) > self.m:
            raise ValueError(f"letter index {i} outside the alphabet of rank {self.m}")
        x = chr(ord("a") + abs(i) - 1)
        return x if i > 0 else x.upper()


def inverse(w: str) -> str:
    return w[::-1].swapcase()


def _check_letters(w: str, m: int | None):
    for x in w:
        if not (x.isascii() and x.isalpha()):
            raise ValueError(f"invalid letter {x!r}")
        if m is not None and ord(x.lower()) - ord("a") >= m:
            raise ValueError(f"letter {x!r} outside the alphabet of rank {m}")


def reduce(raw, m: int | None = None) -> str:
    """Freely reduce a letter string or a sequence of signed indices."""
    if not isinstance(raw, str):
        if m is None:
            m = max((abs(i) for i in raw), default=1)
        ab = FreeAlphabet(m)
        raw = "".join(ab.letter(i) for i in raw)
    _check_letters(raw, m)
    stack = []
    for x in raw:
        if stack and stack[-1] == x.swapcase():
            stack.pop()
        else:
            stack.append(x)
    return "".join(stack)


def parse_word(text: str, m: int | None = None) -> str:
    """Parse the ASCII word format: whitespace ignored, ``1`` is the identity."""
    s = "".join(text.split())
    if s == "1":
        s = ""
    return reduce(s, m)


def format_word(w: str) -> str:
    return w if w else "1"


def to_indices(w: str) -> tuple[int, ...]:
    return tuple(ord(x.lower()) - 96 if x.islower() else -(ord(x.lower()) - 96) for x in w)


def is_reduced(w: str) -> bool:
    return all(w[i] != w[i + 1].swapcase() for i in range(len(w) - 1))


def is_cyclically_reduced(w: str) -> bool:
    return is_reduced(w) and (len(w) < 2 or w[0] != w[-1].swapcase())


def cyclic_reduce(w: str) -> str:
    w = reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == w[j - 1].swapcase():
        i += 1
        j -= 1
    return w[i:j]


def rotations(w: str) -> list[str]:
    return [w[i:] + w[:i] for i in range(len(w))] if w else [""]


def cyclic_conjugates(w: str, with_inverse: bool = False) -> set[str]:
    """All rotations of a cyclically reduced word (and of its inverse)."""
    if not is_cyclically_reduced(w):
        raise ValueError(f"{w!r} is not cyclically reduced")
    out = set(rotations(w))
    if with_inverse:
        out.update(rotations(inverse(w)))
    return out


def cyclic_class_rep(w: str) -> str:
    """Canonical-order minimum over rotations of ``w`` and ``w^-1``."""
    return min(cyclic_conjugates(w, with_inverse=True), key=canonical_key)


def ball_size(m: int, n: int) -> int:
    """Number of elements of length at most ``n`` in the free group of rank m >= 2."""
    if m < 2:
        raise ValueError("closed form needs m >= 2; rank 1 balls have 2n+1 elements")
    if n < 0:
        raise ValueError("radius must be non-negative")
    return m * ((2 * m - 1) ** n - 1) // (m - 1) + 1


def sphere_size(m: int, n: int) -> int:
    """Number of reduced words of length exactly ``n``."""
    if n == 0:
        return 1
    return 2 * m * (2 * m - 1) ** (n - 1)


def free_ball_size(m: int, n: int) -> int:
    """Ball size valid for every rank, including m = 1."""
    return sum(sphere_size(m, k) for k in range(n + 1))


def _extend(words, letters):
    out = []
    for w in words:
        last = w[-1].swapcase()
        out.extend(w + x for x in letters if x != last)
    return out


def words_by_length(m: int, n: int, first: str | None = None) -> list[list[str]]:
    """Reduced words of length 0..n, per length, in canonical order.

    With ``first`` set, only words starting with that letter are produced
    (the identity is then omitted); this is the sharding unit.
    """
    letters = alphabet(m)
    if first is None:
        layers = [[""]]
        current = list(letters)
    else:
        layers = [[]]
        current = [first]
    if n >= 1:
        layers.append(current)
    for _ in range(2, n + 1):
        current = _extend(current, letters)
        layers.append(current)
    return layers


def iter_ball(m: int, n: int):
    """Lazily yield the ball of radius ``n`` in canonical order."""
    letters = alphabet(m)

    def rec(prefix, remaining):
        if remaining == 0:
            yield prefix
            return
        last = prefix[-1].swapcase() if prefix else None
        for x in letters:
            if x != last:
                yield from rec(prefix + x, remaining - 1)

    for length in range(n + 1):
        yield from rec("", length)


def _shard_layers(m, n, first):
    return words_by_length(m, n, first)


def merged_layers(m: int, n: int, threads: int = 1) -> list[list[str]]:
    shards = shard_map(partial(_shard_layers, m, n), alphabet(m), threads)
    layers = [[""]]
    for k in range(1, n + 1):
        layers.append([w for shard in shards for w in shard[k]])
    return layers


@dataclass(frozen=True)
class Ball:
    m: int
    n: int
    words: tuple[str, ...]

    @property
    def beta(self) -> int:
        return len(self.words)

    def sigma(self) -> int:
        return free_ball_size(self.m, self.n + 1) - free_ball_size(self.m, self.n)

    def index(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.words)}


def enumerate_ball(m: int, n: int, budget: int | None = None, threads: int = 1) -> Ball:
    if n < 0:
        raise ValueError("radius must be non-negative")
    check_budget(free_ball_size(m, n), budget, f"ball(m={m}, n={n})")
    layers = merged_layers(m, n, threads)
    return Ball(m, n, tuple(w for layer in layers for w in layer))


def _cyc_shard(m, n, first):
    layer = words_by_length(m, n, first)[n]
    inv = first.swapcase()
    return [w for w in layer if w[-1] != inv]


def enumerate_cyc(m: int, n: int, budget: int | None = None, threads: int = 1) -> list[str]:
    """Cyclically reduced words of length exactly ``n`` in canonical order."""
    if n < 1:
        raise ValueError("cyc(n) is defined for n >= 1")
    check_budget(sphere_size(m, n), budget, f"cyc(m={m}, n={n})")
    shards = shard_map(partial(_cyc_shard, m, n), alphabet(m), threads)
    return [w for shard in shards for w in shard]


def count_cyc(m: int, n: int) -> int:
    """Count cyclically reduced words of length n by a first/last-letter recursion.

    Exact counting without enumeration, used for sampling estimates at
    lengths too large to list.
    """
    if n < 1:
        raise ValueError("cyc(n) is defined for n >= 1")
    if n == 1:
        return 2 * m
    L = 2 * m
    # words starting at a fixed letter x, split by last letter:
    # x itself, x^-1, or any of the other 2m-2 letters (aggregated)
    same, inv, other = 1, 0, 0
    for _ in range(n - 1):
        same, inv, other = (
            same + other,
            inv + other,
            (same + inv) * (L - 2) + other * (L - 3),
        )
    return L * (same + other)
