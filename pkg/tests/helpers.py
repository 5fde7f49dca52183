"""Shared corpus builders, seeded generators, and slow reference computations."""

import random
from fractions import Fraction

from ncfree.freeprob import CumulantModel, NcPolynomial, phi_poly
from ncfree.oracle import nc_by_filter
from ncfree.rcyclic import MatrixFamily, RCyclicFamily, entry_letter
from ncfree.series import Series

VALUES = [
    Fraction(1),
    Fraction(-1),
    Fraction(2),
    Fraction(1, 2),
    Fraction(-1, 2),
    Fraction(3, 2),
    Fraction(-2, 3),
]


def random_series(rng: random.Random, alphabet: int, order: int, per_length: int = 3) -> Series:
    coeffs = {}
    for n in range(1, order + 1):
        for _ in range(rng.randint(1, per_length)):
            w = tuple(rng.randint(1, alphabet) for _ in range(n))
            coeffs[w] = rng.choice(VALUES)
    return Series.of(alphabet, order, coeffs)


def random_invertible_series(rng: random.Random, alphabet: int, order: int) -> Series:
    coeffs = dict(random_series(rng, alphabet, order).coeffs)
    for r in range(1, alphabet + 1):
        coeffs[(r,)] = rng.choice(VALUES)
    return Series.of(alphabet, order, coeffs)


def random_model(
    rng: random.Random, generators: int, order: int, per_length: int = 2
) -> CumulantModel:
    table = {}
    for n in range(1, order + 1):
        for _ in range(rng.randint(1, per_length)):
            w = tuple(rng.randint(1, generators) for _ in range(n))
            table[w] = rng.choice(VALUES)
    return CumulantModel.of(generators, order, table)


def random_cyclic_table(
    rng: random.Random, d: int, s: int, order: int, per_length: int = 2
) -> RCyclicFamily:
    table = {}
    for n in range(1, order + 1):
        for _ in range(rng.randint(1, per_length)):
            rw = tuple(rng.randint(1, s) for _ in range(n))
            iw = tuple(rng.randint(1, d) for _ in range(n))
            table[(rw, iw)] = rng.choice(VALUES)
    return RCyclicFamily.of(d, s, order, table)


def model_from_cyclic_table(fam: RCyclicFamily) -> tuple[CumulantModel, MatrixFamily]:
    """Entry-generator model whose only nonzero cumulants realize the cyclic table."""
    d, s = fam.d, fam.s
    table = {}
    for (rw, iw), v in fam.table.items():
        n = len(rw)
        word = tuple(
            entry_letter(rw[t], iw[t - 1] if t else iw[n - 1], iw[t], d) for t in range(n)
        )
        table[word] = v
    model = CumulantModel.of(s * d * d, fam.order, table)
    return model, MatrixFamily.from_generator_entries(d, s, model)


# -- fixed corpus families, all built over 2x2 entry generators --------------


def circular_2x2(order: int = 6) -> MatrixFamily:
    """Zero diagonal, one circular pair offdiagonal: a12, a21 with k2 = 1 both ways."""
    model = CumulantModel.of(4, order, {(2, 3): 1, (3, 2): 1})
    return MatrixFamily.from_generator_entries(2, 1, model)


def diagonal_free_2x2(order: int = 6) -> MatrixFamily:
    """diag(a, b) with a, b free standard semicirculars; offdiagonal entries zero."""
    model = CumulantModel.of(4, order, {(1, 1): 1, (4, 4): 1})
    grid = (
        (NcPolynomial.generator(1), NcPolynomial.zero()),
        (NcPolynomial.zero(), NcPolynomial.generator(4)),
    )
    return MatrixFamily.of(2, 1, model, (grid,))


MIXED_TABLE = {(1, 1): 1, (4, 4): 1, (2, 3): 1, (3, 2): 1}


def mixed_2x2(order: int = 6) -> MatrixFamily:
    """Free semicircular diagonal plus a circular offdiagonal pair, radius 2 throughout."""
    model = CumulantModel.of(4, order, MIXED_TABLE)
    return MatrixFamily.from_generator_entries(2, 1, model)


def two_free_mixed_2x2(order: int = 6) -> MatrixFamily:
    """Two matrices with mixed_2x2 entry structure and no cumulants across them."""
    table = {}
    for base in (0, 4):
        for (a, b), v in MIXED_TABLE.items():
            table[(base + a, base + b)] = v
    model = CumulantModel.of(8, order, table)
    return MatrixFamily.from_generator_entries(2, 2, model)


def first_moment_family(order: int = 4) -> MatrixFamily:
    """Single nonzero first moment in the offdiagonal entry a12; not R-cyclic."""
    model = CumulantModel.of(4, order, {(2,): 1})
    return MatrixFamily.from_generator_entries(2, 1, model)


def detached_diagonal_family(order: int = 4) -> MatrixFamily:
    """k2(a11, a22) = 1 links the two diagonal entries; not R-cyclic, yet every
    index chain broken at the far end still vanishes."""
    model = CumulantModel.of(4, order, {(1, 4): 1})
    return MatrixFamily.from_generator_entries(2, 1, model)


def constant_table_family(
    d: int, s: int, order: int, alpha: dict[tuple[int, ...], Fraction]
) -> RCyclicFamily:
    """Cyclic table constant across index words: value alpha[rword] for every iword."""
    import itertools

    table = {}
    for rw, v in alpha.items():
        for iw in itertools.product(range(1, d + 1), repeat=len(rw)):
            table[(tuple(rw), iw)] = v
    return RCyclicFamily.of(d, s, order, table)


# -- slow reference cumulant of arbitrary polynomial arguments ----------------


def cumulant_of_elements(model: CumulantModel, polys) -> Fraction:
    """Joint cumulant by the defining recursion: the full expectation minus the
    contributions of every coarser non-crossing splitting."""

    memo: dict[tuple[NcPolynomial, ...], Fraction] = {}

    def k(args: tuple[NcPolynomial, ...]) -> Fraction:
        if args in memo:
            return memo[args]
        prod = args[0]
        for p in args[1:]:
            prod = prod * p
        acc = phi_poly(model, prod)
        for part in nc_by_filter(len(args)):
            if part.block_count() == 1:
                continue
            term = Fraction(1)
            for block in part.blocks:
                term *= k(tuple(args[e - 1] for e in block))
                if not term:
                    break
            acc -= term
        memo[args] = acc
        return acc

    return k(tuple(polys))

