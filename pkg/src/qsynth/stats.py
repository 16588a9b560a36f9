"""Distribution distance measures used by verification reports.

All logarithms are natural.  Divergences accept any two equal-length
sequences of probabilities; histogram-vs-model testing goes through
g_statistic, which reduces to 2 * shots * KL(empirical || expected) when
the supports line up.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.stats import chi2

from .simulate import CountHistogram


def _as_dist(p) -> np.ndarray:
    arr = np.asarray(list(p) if not isinstance(p, np.ndarray) else p, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("expected a non-empty 1-D distribution")
    if np.any(arr < 0):
        raise ValueError("probabilities must be non-negative")
    return arr


def kl_divergence(p, q) -> float:
    """Kullback-Leibler divergence sum(P * ln(P/Q)), in nats.

    Terms with P=0 contribute nothing.  Any bin with P>0 and Q=0 makes the
    divergence infinite; that sentinel is returned (with a warning) rather
    than raised, so callers can report it.
    """
    parr, qarr = _as_dist(p), _as_dist(q)
    if parr.shape != qarr.shape:
        raise ValueError("distributions must have equal length")
    support = parr > 0
    if np.any(qarr[support] == 0):
        warnings.warn("KL divergence is infinite: P has mass where Q has none")
        return math.inf
    return float(np.sum(parr[support] * np.log(parr[support] / qarr[support])))


def js_divergence(p, q) -> float:
    """Jensen-Shannon divergence: always finite, symmetric, in [0, ln 2]."""
    parr, qarr = _as_dist(p), _as_dist(q)
    if parr.shape != qarr.shape:
        raise ValueError("distributions must have equal length")
    mid = 0.5 * (parr + qarr)
    return 0.5 * kl_divergence(parr, mid) + 0.5 * kl_divergence(qarr, mid)


def g_statistic(observed: CountHistogram, expected) -> tuple[float, float]:
    """Log-likelihood-ratio goodness-of-fit test of counts against a model.

    Returns (G, p) with G = 2 * sum(O_i * ln(O_i / E_i)) over the model's
    bins, E_i = shots * expected_i, and p the upper-tail chi-square
    probability of G with bins-1 degrees of freedom.  A bin with zero
    expectation but positive observation makes G infinite (warned, p=0).

    G equals 2 * shots * KL(empirical || expected) whenever every observed
    outcome has positive expectation.
    """
    q = _as_dist(expected)
    bins = q.size
    num_bits = (bins - 1).bit_length()
    if bins != 1 << num_bits:
        raise ValueError("expected distribution length must be a power of two")
    if observed.num_bits != num_bits:
        raise ValueError(
            f"histogram is over {observed.num_bits}-bit strings, model over {num_bits}-bit bins"
        )

    shots = observed.shots
    g = 0.0
    for bits, count in observed.counts.items():
        if count == 0:
            continue
        e = shots * q[int(bits, 2)]
        if e == 0.0:
            warnings.warn("observed counts in a zero-probability bin: G is infinite")
            return math.inf, 0.0
        g += 2.0 * count * math.log(count / e)
    p = float(chi2.sf(g, df=bins - 1))
    return g, p
