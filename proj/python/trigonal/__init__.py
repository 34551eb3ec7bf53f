"""Sigma functions of the trigonal genus three curve y^3 = x^4 + l3 x^3 + l6 x^2 + l9 x + l12."""

import json

from . import _core
from ._core import Curve, NumericContext, SeriesError, numeric_context, version

__all__ = [
    "Curve",
    "NumericContext",
    "SeriesError",
    "acceptance",
    "check",
    "numeric_context",
    "sigma_expansion",
    "version",
]


def sigma_expansion(curve, cutoff):
    """Power series of sigma up to the given u-weight, as {"series": ..., "text": ...}."""
    return json.loads(_core.sigma_expansion(curve, cutoff))


def check(identity, curve, mode="exact", **options):
    """Runs one identity check and returns its report as a dict.

    identity is one of prop41, lemma36, lemma51, fs, kiepert, bilinear; mode is exact,
    series or numeric. Keyword options match the CLI verify flags.
    """
    return json.loads(_core.check(identity, curve, mode, **options))


def acceptance(only=(), seed=1):
    return json.loads(_core.acceptance(list(only), seed))
