#!/usr/bin/env python3
"""Walk through the main exact computations on small worked examples.

Run from the repository root after installing the package:

    python3 scripts/worked_examples.py
"""

from fractions import Fraction

from ncfree import (
    CumulantModel,
    MatrixFamily,
    OperatorMatrix,
    Partition,
    check_amalgamated_freeness,
    check_free,
    coef,
    cyclic_family,
    determining_series,
    dvalued_cumulant,
    family_moments,
    family_rtransform,
    h_series,
    kreweras,
    moebius,
    to_tsv,
)


def banner(text: str) -> None:
    print(f"\n== {text} ==")


def family_matrix(fam: MatrixFamily, r: int = 1) -> OperatorMatrix:
    grid = [[fam.entry(r, i, j) for j in range(1, fam.d + 1)] for i in range(1, fam.d + 1)]
    return OperatorMatrix.of(fam.model, grid)


def main() -> None:
    banner("Kreweras complement")
    p = Partition.of(5, [[1, 2, 5], [3, 4]])
    print(f"complement of {p} is {kreweras(p)}")

    banner("Moebius series coefficients (one letter)")
    m = moebius(1, 6)
    print(", ".join(str(coef(m, (1,) * n)) for n in range(1, 7)))

    banner("Index-sum series for dimension 2, truncated at degree 3")
    print(to_tsv(h_series(2, 3)), end="")

    banner("One circular pair: the family is standard semicircular")
    circ = MatrixFamily.from_generator_entries(
        2, 1, CumulantModel.of(4, 6, {(2, 3): 1, (3, 2): 1})
    )
    f = determining_series(circ)
    print("cyclic table:", dict(cyclic_family(circ).table))
    print("R-transform:", dict(family_rtransform(f, 2).coeffs))
    mom = family_moments(f, 2)
    print("moments:", [coef(mom, (1,) * n) for n in range(1, 7)])

    banner("All entries radius 2: semicircular with doubled variance")
    mixed = MatrixFamily.from_generator_entries(
        2, 1, CumulantModel.of(4, 6, {(1, 1): 1, (4, 4): 1, (2, 3): 1, (3, 2): 1})
    )
    fm = determining_series(mixed)
    print("R-transform:", dict(family_rtransform(fm, 2).coeffs))
    mm = family_moments(fm, 2)
    print("even moments:", [coef(mm, (1,) * n) for n in (2, 4, 6)])

    banner("Two matrices with independent entries are free")
    table = {}
    for base in (0, 4):
        for (a, b), v in ((1, 1), 1), ((4, 4), 1), ((2, 3), 1), ((3, 2), 1):
            table[(base + a, base + b)] = Fraction(v)
    pair = MatrixFamily.from_generator_entries(2, 2, CumulantModel.of(8, 4, table))
    rt = family_rtransform(determining_series(pair), 2)
    print("joint R-transform:", dict(rt.coeffs))
    ok, witness = check_free(rt, [[1], [2]])
    print("free across the two matrices:", ok)

    banner("Diagonal-valued cumulants and amalgamated freeness")
    x = family_matrix(mixed)
    k2 = dvalued_cumulant([x, x])
    print("second diagonal cumulant:", [[str(k2.entry(i, j)) for j in (1, 2)] for i in (1, 2)])
    ok, witness = check_amalgamated_freeness([x], budget=4)
    print("free from the diagonal matrices:", ok)
    bad = MatrixFamily.from_generator_entries(2, 1, CumulantModel.of(4, 4, {(2,): 1}))
    ok, witness = check_amalgamated_freeness([family_matrix(bad)], budget=2)
    print(f"family with an offdiagonal mean: free={ok}, witness={witness!r}")


if __name__ == "__main__":
    main()
