"""Truncated formal power series in non-commuting indeterminates.

A series over alphabet size s and truncation order N stores exact rational
coefficients on words (tuples of letters in 1..s) of length 1..N.  There is
no constant term, and zero coefficients are never stored.

The central operation is the boxed convolution: the coefficient of a word w
in f [*] g is the sum over non-crossing partitions pi of the generalized
coefficient of f at (w, pi) times the generalized coefficient of g at
(w, Kreweras complement of pi), where a generalized coefficient is the
product of ordinary coefficients over the restrictions of w to the blocks.

The extended variant pairs a series over s*d letters (encoded pairs (r, i)
with r outer: letter = (r-1)*d + i) with a series over d letters; the second
factor only sees the i-components of the word.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Mapping

from .ncpartition import Partition, enumerate_nc, kreweras

Word = tuple[int, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def format_rational(x: Fraction) -> str:
    """Lowest terms with an explicit positive denominator, e.g. 3/1, -1/2."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Series:
    """Sparse truncated series; items are sorted by word length then word."""

    alphabet: int
    order: int
    items: tuple[tuple[Word, Fraction], ...]

    @classmethod
    def of(cls, alphabet: int, order: int, coeffs: Mapping[Word, Fraction | int]) -> "Series":
        if alphabet < 1:
            raise ValueError(f"alphabet size must be positive, got {alphabet}")
        if order < 1:
            raise ValueError(f"truncation order must be positive, got {order}")
        norm: dict[Word, Fraction] = {}
        for w, v in coeffs.items():
            word = tuple(w)
            if not word:
                raise ValueError("series have no constant term")
            if len(word) > order:
                raise ValueError(f"word {word} longer than order {order}")
            if any(not 1 <= letter <= alphabet for letter in word):
                raise ValueError(f"letters of {word} out of range 1..{alphabet}")
            val = Fraction(v)
            if val:
                norm[word] = val
        items = tuple(sorted(norm.items(), key=lambda kv: (len(kv[0]), kv[0])))
        return cls(alphabet, order, items)

    @cached_property
    def coeffs(self) -> dict[Word, Fraction]:
        return dict(self.items)

    @cached_property
    def support_by_length(self) -> dict[int, tuple[tuple[Word, Fraction], ...]]:
        out: dict[int, list[tuple[Word, Fraction]]] = {}
        for w, v in self.items:
            out.setdefault(len(w), []).append((w, v))
        return {n: tuple(rows) for n, rows in out.items()}


def coef(f: Series, w: Iterable[int]) -> Fraction:
    word = tuple(w)
    if not 1 <= len(word) <= f.order:
        raise ValueError(f"word length must be in 1..{f.order}, got {len(word)}")
    return f.coeffs.get(word, _ZERO)


def gen_coef(f: Series, w: Iterable[int], p: Partition) -> Fraction:
    """Product of coefficients of f over the restrictions of w to the blocks of p."""
    word = tuple(w)
    if p.n != len(word):
        raise ValueError(f"partition of {p.n} applied to word of length {len(word)}")
    out = _ONE
    for block in p.blocks:
        c = f.coeffs.get(tuple(word[e - 1] for e in block))
        if not c:
            return _ZERO
        out *= c
    return out


@lru_cache(maxsize=None)
def _nc_pairs(n: int) -> tuple[tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]], ...]:
    # per partition: (blocks, complement blocks) as 0-based position tuples
    out = []
    for p in enumerate_nc(n):
        q = kreweras(p)
        out.append(
            (
                tuple(tuple(e - 1 for e in b) for b in p.blocks),
                tuple(tuple(e - 1 for e in b) for b in q.blocks),
            )
        )
    return tuple(out)


def _convolve(f: Series, g: Series, project: Callable[[int], int] | None) -> dict[Word, Fraction]:
    # Iterate over fillings of each partition's blocks by support words of f;
    # every word with a nonzero output coefficient arises this way, so sparse
    # operands never force a scan of the full alphabet.
    acc: dict[Word, Fraction] = {}
    supp = f.support_by_length
    gc = g.coeffs
    for n in range(1, f.order + 1):
        for blocks, co_blocks in _nc_pairs(n):
            pools = []
            for b in blocks:
                pool = supp.get(len(b))
                if not pool:
                    pools = None
                    break
                pools.append(pool)
            if pools is None:
                continue
            for combo in itertools.product(*pools):
                w = [0] * n
                c = _ONE
                for b, (bw, bc) in zip(blocks, combo):
                    c *= bc
                    for pos, letter in zip(b, bw):
                        w[pos] = letter
                pw = w if project is None else [project(x) for x in w]
                for b2 in co_blocks:
                    side = gc.get(tuple(pw[pos] for pos in b2))
                    if not side:
                        break
                    c *= side
                else:
                    word = tuple(w)
                    prev = acc.get(word)
                    acc[word] = c if prev is None else prev + c
    return acc


def boxed_convolve(f: Series, g: Series) -> Series:
    """Coefficientwise sum over non-crossing partitions against the complement."""
    if f.alphabet != g.alphabet:
        raise ValueError(f"alphabet mismatch: {f.alphabet} vs {g.alphabet}")
    if f.order != g.order:
        raise ValueError(f"order mismatch: {f.order} vs {g.order}; re-truncate explicitly")
    return Series.of(f.alphabet, f.order, _convolve(f, g, None))


def ext_boxed_convolve(f: Series, g: Series) -> Series:
    """Boxed convolution of a pair-letter series against a plain one.

    f lives on s*d letters encoding pairs (r, i); g lives on d letters and is
    evaluated on the i-components only.  The result lives on the pair letters.
    """
    d = g.alphabet
    if f.alphabet % d != 0:
        raise ValueError(f"pair alphabet {f.alphabet} not a multiple of {d}")
    if f.order != g.order:
        raise ValueError(f"order mismatch: {f.order} vs {g.order}; re-truncate explicitly")
    return Series.of(f.alphabet, f.order, _convolve(f, g, lambda x: (x - 1) % d + 1))


def boxed_inverse(f: Series) -> Series:
    """Two-sided inverse for the boxed convolution, solved degree by degree.

    The coefficient of the inverse at a word of length n appears only in the
    all-singletons term of the convolution, so each degree is a single
    division once the lower degrees are known.  Requires every degree-1
    coefficient to be nonzero.
    """
    s, order = f.alphabet, f.order
    deg1 = {}
    for r in range(1, s + 1):
        c = f.coeffs.get((r,))
        if not c:
            raise ValueError(f"degree-1 coefficient at letter {r} is zero; not invertible")
        deg1[r] = c
    inv: dict[Word, Fraction] = {(r,): 1 / deg1[r] for r in range(1, s + 1)}
    fc = f.coeffs
    for n in range(2, order + 1):
        pairs = [pq for pq in _nc_pairs(n) if len(pq[0]) != n]
        for w in itertools.product(range(1, s + 1), repeat=n):
            acc = _ZERO
            for blocks, co_blocks in pairs:
                term = _ONE
                for b in blocks:
                    c = fc.get(tuple(w[pos] for pos in b))
                    if not c:
                        term = _ZERO
                        break
                    term *= c
                if not term:
                    continue
                for b2 in co_blocks:
                    c = inv.get(tuple(w[pos] for pos in b2))
                    if not c:
                        term = _ZERO
                        break
                    term *= c
                acc += term
            if acc:
                denom = _ONE
                for letter in w:
                    denom *= deg1[letter]
                inv[w] = -acc / denom
    return Series.of(s, order, inv)


def dilate(f: Series, alpha: Fraction | int) -> Series:
    """Rescale each degree-n coefficient by alpha**n."""
    a = Fraction(alpha)
    return Series.of(f.alphabet, f.order, {w: v * a ** len(w) for w, v in f.items})


def scale(f: Series, alpha: Fraction | int) -> Series:
    a = Fraction(alpha)
    return Series.of(f.alphabet, f.order, {w: v * a for w, v in f.items})


def add(f: Series, g: Series) -> Series:
    if f.alphabet != g.alphabet or f.order != g.order:
        raise ValueError("operands must share alphabet and order")
    out = dict(f.coeffs)
    for w, v in g.items:
        out[w] = out.get(w, _ZERO) + v
    return Series.of(f.alphabet, f.order, out)


def truncate(f: Series, order: int) -> Series:
    """Drop coefficients beyond the new (smaller or equal) order."""
    if order > f.order:
        raise ValueError(f"cannot extend order {f.order} to {order}")
    return Series.of(f.alphabet, order, {w: v for w, v in f.items if len(w) <= order})


def zeta(s: int, order: int) -> Series:
    """Coefficient 1 on every word."""
    out = {}
    for n in range(1, order + 1):
        for w in itertools.product(range(1, s + 1), repeat=n):
            out[w] = _ONE
    return Series.of(s, order, out)


def moebius(s: int, order: int) -> Series:
    """The boxed inverse of zeta; signed Catalan coefficient by length."""
    out = {}
    for n in range(1, order + 1):
        val = Fraction((-1) ** (n + 1) * math.comb(2 * n - 2, n - 1), n)
        for w in itertools.product(range(1, s + 1), repeat=n):
            out[w] = val
    return Series.of(s, order, out)


def delta(s: int, order: int) -> Series:
    """Coefficient 1 on degree-1 words only; the unit for boxed convolution."""
    return Series.of(s, order, {(r,): _ONE for r in range(1, s + 1)})


def geometric(d: int, order: int) -> Series:
    """Coefficient 1 exactly on the constant words (i, i, ..., i)."""
    out = {}
    for n in range(1, order + 1):
        for i in range(1, d + 1):
            out[(i,) * n] = _ONE
    return Series.of(d, order, out)


def h_series(d: int, order: int) -> Series:
    """The companion of the constant-word series used for R-transforms.

    Convolving a determining series against this on the right and averaging
    the diagonal substitution gives the R-transform of the matrix family,
    the same way the constant-word series gives the moments.
    """
    stretched = scale(dilate(moebius(d, order), Fraction(1, d)), d)
    return boxed_convolve(geometric(d, order), stretched)


def pair_letter(r: int, i: int, d: int) -> int:
    return (r - 1) * d + i


def split_letter(letter: int, d: int) -> tuple[int, int]:
    return (letter - 1) // d + 1, (letter - 1) % d + 1


def pair_word(rword: Iterable[int], iword: Iterable[int], d: int) -> Word:
    rw, iw = tuple(rword), tuple(iword)
    if len(rw) != len(iw):
        raise ValueError("component words must have equal length")
    return tuple(pair_letter(r, i, d) for r, i in zip(rw, iw))


def split_word(w: Iterable[int], d: int) -> tuple[Word, Word]:
    pairs = [split_letter(letter, d) for letter in w]
    return tuple(p[0] for p in pairs), tuple(p[1] for p in pairs)


def to_tsv(f: Series, pair_d: int | None = None) -> str:
    """One line per stored coefficient: word TAB value, sorted by length then word.

    Plain letters print comma-separated; with pair_d given, letters decode to
    r:i tokens.
    """
    lines = []
    for w, v in f.items:
        if pair_d is None:
            key = ",".join(str(x) for x in w)
        else:
            key = ",".join(f"{r}:{i}" for r, i in (split_letter(x, pair_d) for x in w))
        lines.append(f"{key}\t{format_rational(v)}")
    return "\n".join(lines)
