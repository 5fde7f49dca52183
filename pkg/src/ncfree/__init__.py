"""Exact combinatorics of block-matrix families with cyclic cumulants."""

from .freeprob import (
    CumulantModel,
    NcPolynomial,
    check_free,
    m_from_r,
    moment_series,
    phi_poly,
    phi_word,
    r_transform,
)
from .ncpartition import Partition, enumerate_nc, is_noncrossing, kreweras
from .opvalued import (
    OperatorMatrix,
    ScalarMatrix,
    bvalued_cumulant_entrywise,
    check_amalgamated_freeness,
    dcumulant_data,
    dvalued_cumulant,
    expect_b,
    expect_d,
    opvalued_cumulant_generic,
    rcyclic_witness_from_dcumulants,
)
from .rcyclic import (
    MatrixFamily,
    PartialSumError,
    RCyclicFamily,
    closure_check,
    cyclic_family,
    determining_series,
    entry_letter,
    family_moments,
    family_rtransform,
    is_rcyclic,
    partial_sum_rtransform,
)
from .series import (
    Series,
    boxed_convolve,
    boxed_inverse,
    coef,
    delta,
    dilate,
    ext_boxed_convolve,
    format_rational,
    geometric,
    h_series,
    moebius,
    to_tsv,
    zeta,
)

__version__ = "0.1.0"

__all__ = [
    "CumulantModel",
    "MatrixFamily",
    "NcPolynomial",
    "OperatorMatrix",
    "PartialSumError",
    "Partition",
    "RCyclicFamily",
    "ScalarMatrix",
    "Series",
    "boxed_convolve",
    "boxed_inverse",
    "bvalued_cumulant_entrywise",
    "check_amalgamated_freeness",
    "check_free",
    "closure_check",
    "coef",
    "cyclic_family",
    "dcumulant_data",
    "delta",
    "determining_series",
    "dilate",
    "dvalued_cumulant",
    "entry_letter",
    "enumerate_nc",
    "expect_b",
    "expect_d",
    "ext_boxed_convolve",
    "family_moments",
    "family_rtransform",
    "format_rational",
    "geometric",
    "h_series",
    "is_noncrossing",
    "is_rcyclic",
    "kreweras",
    "m_from_r",
    "moebius",
    "moment_series",
    "opvalued_cumulant_generic",
    "partial_sum_rtransform",
    "phi_poly",
    "phi_word",
    "r_transform",
    "rcyclic_witness_from_dcumulants",
    "to_tsv",
    "zeta",
]
