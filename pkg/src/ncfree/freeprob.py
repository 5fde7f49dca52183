"""Joint distributions presented by their free cumulants.

A model fixes m generators and a sparse table of joint cumulants (word ->
rational).  The state of a word is the sum over non-crossing partitions of
the products of table entries on the restricted subwords; polynomials in the
generators are evaluated by linearity.  The state is not assumed tracial.

Moment series and R-transforms convert between the two coefficient systems
through boxed convolution with the zeta and Moebius series.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .series import Series, _nc_pairs, boxed_convolve, moebius, zeta

Word = tuple[int, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class CumulantModel:
    """m generators with joint cumulants given sparsely up to a fixed order."""

    generators: int
    order: int
    items: tuple[tuple[Word, Fraction], ...]

    @classmethod
    def of(
        cls, generators: int, order: int, table: Mapping[Word, Fraction | int]
    ) -> "CumulantModel":
        if generators < 1 or order < 1:
            raise ValueError("need at least one generator and positive order")
        norm: dict[Word, Fraction] = {}
        for w, v in table.items():
            word = tuple(w)
            if not 1 <= len(word) <= order:
                raise ValueError(f"cumulant word {word} outside order 1..{order}")
            if any(not 1 <= g <= generators for g in word):
                raise ValueError(f"letters of {word} out of range 1..{generators}")
            val = Fraction(v)
            if val:
                norm[word] = val
        items = tuple(sorted(norm.items(), key=lambda kv: (len(kv[0]), kv[0])))
        return cls(generators, order, items)

    @cached_property
    def table(self) -> dict[Word, Fraction]:
        return dict(self.items)

    @cached_property
    def _phi_cache(self) -> dict[Word, Fraction]:
        return {}


@dataclass(frozen=True)
class NcPolynomial:
    """Polynomial in non-commuting generators; the empty word is the unit."""

    items: tuple[tuple[Word, Fraction], ...]

    @classmethod
    def of(cls, terms: Mapping[Word, Fraction | int]) -> "NcPolynomial":
        norm: dict[Word, Fraction] = {}
        for w, v in terms.items():
            val = Fraction(v)
            if val:
                norm[tuple(w)] = val
        return cls(tuple(sorted(norm.items(), key=lambda kv: (len(kv[0]), kv[0]))))

    @classmethod
    def zero(cls) -> "NcPolynomial":
        return cls(())

    @classmethod
    def unit(cls) -> "NcPolynomial":
        return cls((((), _ONE),))

    @classmethod
    def generator(cls, r: int) -> "NcPolynomial":
        return cls((((r,), _ONE),))

    @cached_property
    def terms(self) -> dict[Word, Fraction]:
        return dict(self.items)

    def degree(self) -> int:
        return max((len(w) for w, _ in self.items), default=0)

    def is_zero(self) -> bool:
        return not self.items

    def __add__(self, other: "NcPolynomial") -> "NcPolynomial":
        out = dict(self.terms)
        for w, v in other.items:
            out[w] = out.get(w, _ZERO) + v
        return NcPolynomial.of(out)

    def __sub__(self, other: "NcPolynomial") -> "NcPolynomial":
        out = dict(self.terms)
        for w, v in other.items:
            out[w] = out.get(w, _ZERO) - v
        return NcPolynomial.of(out)

    def __neg__(self) -> "NcPolynomial":
        return NcPolynomial(tuple((w, -v) for w, v in self.items))

    def __mul__(self, other):
        if isinstance(other, NcPolynomial):
            out: dict[Word, Fraction] = {}
            for w1, v1 in self.items:
                for w2, v2 in other.items:
                    w = w1 + w2
                    out[w] = out.get(w, _ZERO) + v1 * v2
            return NcPolynomial.of(out)
        return self.scale(other)

    def __rmul__(self, other) -> "NcPolynomial":
        return self.scale(other)

    def scale(self, alpha: Fraction | int) -> "NcPolynomial":
        a = Fraction(alpha)
        if not a:
            return NcPolynomial.zero()
        return NcPolynomial(tuple((w, v * a) for w, v in self.items))


def single_generator_form(p: NcPolynomial) -> tuple[Fraction, int] | None:
    """Parse a polynomial that is zero or a scalar multiple of one generator.

    Returns None for the zero polynomial, (coefficient, letter) otherwise;
    raises for anything richer.
    """
    if not p.items:
        return None
    if len(p.items) == 1:
        (w, c), = p.items
        if len(w) == 1:
            return c, w[0]
    raise ValueError(f"entry is not a scalar multiple of a single generator: {p.items}")


def phi_word(model: CumulantModel, w: Iterable[int]) -> Fraction:
    """State of a product of generators: sum of cumulant products over NC(n)."""
    word = tuple(w)
    n = len(word)
    if n == 0:
        return _ONE
    if n > model.order:
        raise ValueError(f"word of length {n} exceeds model order {model.order}")
    cache = model._phi_cache
    hit = cache.get(word)
    if hit is not None:
        return hit
    table = model.table
    acc = _ZERO
    for blocks, _ in _nc_pairs(n):
        term = _ONE
        for b in blocks:
            c = table.get(tuple(word[pos] for pos in b))
            if not c:
                term = _ZERO
                break
            term *= c
        acc += term
    cache[word] = acc
    return acc


def phi_poly(model: CumulantModel, p: NcPolynomial) -> Fraction:
    return sum((v * phi_word(model, w) for w, v in p.items), _ZERO)


def moment_series(
    model: CumulantModel, elements: Sequence[NcPolynomial], order: int | None = None
) -> Series:
    """Joint moment series of the elements: coefficient at (r_1..r_n) is the
    state of the product element_{r_1} * ... * element_{r_n}.

    Raises when a product word outgrows the model order; pick the order so
    that n times the maximal entry degree stays within it.
    """
    n_max = model.order if order is None else order
    s = len(elements)
    if s < 1:
        raise ValueError("need at least one element")
    out: dict[Word, Fraction] = {}

    def walk(word: Word, prod: NcPolynomial) -> None:
        val = phi_poly(model, prod)
        if val:
            out[word] = val
        if len(word) < n_max:
            for r in range(1, s + 1):
                walk(word + (r,), prod * elements[r - 1])

    for r in range(1, s + 1):
        walk((r,), elements[r - 1])
    return Series.of(s, n_max, out)


def r_transform(m: Series) -> Series:
    """Cumulant series of a moment series."""
    return boxed_convolve(m, moebius(m.alphabet, m.order))


def m_from_r(r: Series) -> Series:
    """Moment series of a cumulant series."""
    return boxed_convolve(r, zeta(r.alphabet, r.order))


def check_free(r: Series, families: Sequence[Iterable[int]]) -> tuple[bool, Word | None]:
    """Freeness of groups of letters read off a joint cumulant series.

    The groups must partition 1..alphabet; the first stored word (by length,
    then lexicographically) mixing two groups is returned as the witness.
    """
    owner: dict[int, int] = {}
    for t, fam in enumerate(families):
        for letter in fam:
            if letter in owner:
                raise ValueError(f"letter {letter} in two families")
            owner[letter] = t
    if set(owner) != set(range(1, r.alphabet + 1)):
        raise ValueError("families must partition the alphabet")
    for w, _ in r.items:
        if len({owner[x] for x in w}) > 1:
            return False, w
    return True, None


def product_cumulant(model: CumulantModel, letters: Sequence[int], m: int) -> Fraction:
    """Cumulant with arguments m and m+1 merged into one product argument.

    Evaluates the combination of table entries that expresses the shorter
    cumulant of (x_1, ..., x_m * x_{m+1}, ..., x_n) through the cumulants of
    the unmerged arguments: the full cumulant, the split at m, and the two
    fans of pair products around the merge point.
    """
    word = tuple(letters)
    n = len(word)
    if n < 2:
        raise ValueError("need at least two arguments")
    if not 1 <= m <= n - 1:
        raise ValueError(f"merge position must be in 1..{n - 1}, got {m}")
    if any(not 1 <= g <= model.generators for g in word):
        raise ValueError("letters out of range")
    table = model.table

    def k(sub: Word) -> Fraction:
        return table.get(sub, _ZERO)

    total = k(word)
    total += k(word[:m]) * k(word[m:])
    for j in range(2, m + 1):
        total += k(word[j - 1 : m]) * k(word[: j - 1] + word[m:])
    for j in range(m + 1, n):
        total += k(word[m:j]) * k(word[:m] + word[j:])
    return total
