"""Ordinary least squares on log-log data.

This is the single fitting contract shared by every probe (and mirrored by
the plotting frontend, which must reproduce slopes to 1e-6): OLS of ln(y)
against ln(x), R^2 = 1 - SS_res/SS_tot, residual = sqrt(SS_res / n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r2: float
    residual: float
    n: int

    def as_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r2": self.r2,
            "residual": self.residual,
            "n": self.n,
        }


def fit_loglog(x, y) -> FitResult:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 2:
        raise ValueError("need at least two (x, y) pairs")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("log-log fit needs positive data")
    lx = np.log(x)
    ly = np.log(y)
    mx = float(np.mean(lx))
    my = float(np.mean(ly))
    sxx = float(np.sum((lx - mx) ** 2))
    if sxx == 0.0:
        raise ValueError("x values are all equal")
    slope = float(np.sum((lx - mx) * (ly - my))) / sxx
    intercept = my - slope * mx
    pred = intercept + slope * lx
    ss_res = float(np.sum((ly - pred) ** 2))
    ss_tot = float(np.sum((ly - my) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return FitResult(slope, intercept, r2, math.sqrt(ss_res / x.size), int(x.size))
