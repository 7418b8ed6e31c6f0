"""Bernoulli relative entropy and the normalised rate J_p."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import xlogy

from ..errors import InputError
from .weighted import WeightedRGraph


def _check_p(p):
    if not 0.0 < p < 1.0:
        raise InputError(f"p = {p} must lie strictly between 0 and 1")


def i_p(q, p: float):
    """I_p(q) = q log(q/p) + (1-q) log((1-q)/(1-p)), continuous at q = 0, 1.

    Works elementwise on arrays.
    """
    _check_p(p)
    q = np.asarray(q, dtype=float)
    if np.any(q < 0) or np.any(q > 1) or np.any(np.isnan(q)):
        raise InputError("q must lie in [0, 1]")
    out = xlogy(q, q) - q * math.log(p) + xlogy(1 - q, 1 - q) - (1 - q) * math.log1p(-p)
    out = np.where(q == p, 0.0, np.maximum(out, 0.0))
    return float(out) if out.ndim == 0 else out


def i_p_prime(q, p: float):
    """d I_p / dq = log(q (1-p) / (p (1-q))), for q in (0, 1)."""
    q = np.asarray(q, dtype=float)
    return np.log(q) - np.log1p(-q) - math.log(p) + math.log1p(-p)


def j_p(x, p: float):
    """J_p(x) = I_p(p + x) / log(1/p), for x in [-p, 1-p]."""
    _check_p(p)
    x = np.asarray(x, dtype=float)
    if np.any(x < -p - 1e-15) or np.any(x > 1 - p + 1e-15):
        raise InputError("x must lie in [-p, 1-p]")
    val = i_p(np.clip(p + x, 0.0, 1.0), p) / math.log(1 / p)
    return val


def entropy_Ip(Q: WeightedRGraph, p: float) -> float:
    """I_p(Q) = sum over all r-sets of I_p(q_e)."""
    _check_p(p)
    n_default = math.comb(Q.n, Q.r) - len(Q.overrides)
    total = n_default * i_p(Q.default_q, p)
    if Q.overrides:
        total += float(np.sum(i_p(np.fromiter(Q.overrides.values(), dtype=float), p)))
    return float(total)
