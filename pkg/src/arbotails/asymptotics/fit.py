"""Extrapolating h log f(e^{-h}) to h = 0 along a ray."""
from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import FitError, InvalidArgument, NumericalError
from .evaluate import LogEvaluator

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class AsymptoticEstimate:
    V: complex
    ray_angle: float
    samples: tuple[tuple[complex, complex], ...]
    model_residual: float
    coefficients: dict = field(default_factory=dict)

    def to_json(self, verdict=None) -> dict:
        out = {
            "V": [self.V.real, self.V.imag],
            "ray_angle": self.ray_angle,
            "residual": self.model_residual,
            "coefficients": {k: [v.real, v.imag] for k, v in self.coefficients.items()},
        }
        if verdict is not None:
            out["verdict"] = verdict.to_json()
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["h_re", "h_im", "g_re", "g_im"])
        for h, g in self.samples:
            w.writerow([repr(h.real), repr(h.imag), repr(g.real), repr(g.imag)])
        return buf.getvalue()


def schedule(ray_angle: float, h0: float, ratio: float, count: int) -> list[complex]:
    if not 0 < ratio < 1 or h0 <= 0 or count < 1:
        raise InvalidArgument("need h0 > 0, 0 < ratio < 1 and count >= 1")
    if abs(ray_angle) >= math.pi / 2:
        raise InvalidArgument("the ray must point into the right half-plane")
    rot = cmath.exp(1j * ray_angle)
    return [h0 * ratio ** j * rot for j in range(count)]


def track_logs(f: LogEvaluator, hs: Sequence[complex], max_dev: float = 0.5) -> list[complex]:
    """Continuous branch of log f(e^{-h}) at the points ``hs`` of one ray, outermost first.

    The phase of f winds roughly like Im(V/h), i.e. linearly in u = 1/|h|, so
    the path is followed in u with a secant predictor; each raw value is moved
    by the multiple of 2 pi i closest to the prediction, and steps whose
    correction is not clearly identified are halved.
    """
    if not hs:
        return []
    rot = hs[0] / abs(hs[0])
    us = [1 / abs(h) for h in hs]
    if any(b <= a for a, b in zip(us, us[1:])):
        raise InvalidArgument("samples must move towards h = 0")

    def raw(u: float) -> complex:
        return complex(f(rot / u))

    u = us[0]
    L = raw(u)
    du = 1e-4 * u
    slope = _nearest(raw(u + du), L) - L
    slope /= du
    out = [L]
    step = min(1.0 / max(abs(slope.imag), 1e-12), us[-1] - u) if len(us) > 1 else 0.0
    for target in us[1:]:
        while u < target:
            s = min(step, target - u)
            pred = L + slope * s
            new = _nearest(raw(u + s), pred)
            dev = abs((new - pred).imag)
            if dev > max_dev:
                if s < 1e-9 * u:
                    raise NumericalError("lost track of the logarithm branch")
                step = s / 2
                continue
            slope = (new - L) / s
            u, L = u + s, new
            if dev < max_dev / 5:
                step = s * 1.5
        out.append(L)
    return out


def _nearest(value: complex, target: complex) -> complex:
    k = round((target - value).imag / TWO_PI)
    return value + TWO_PI * k * 1j


def _design(hs: np.ndarray, M: int, with_log: bool) -> tuple[np.ndarray, list[str]]:
    cols, names = [np.ones_like(hs)], ["V"]
    if with_log:
        cols.append(hs * np.log(hs))
        names.append("alpha")
    for m in range(1, M + 1):
        cols.append(hs ** m)
        names.append(f"c{m}")
    return np.array(cols).T, names


def fit_limit(hs: Sequence[complex], gs: Sequence[complex], M: int = 3, with_log: bool = True):
    """Least-squares fit of g(h) = V + alpha h log h + sum c_m h^m."""
    hs = np.asarray(hs, dtype=complex)
    gs = np.asarray(gs, dtype=complex)
    A, names = _design(hs, M, with_log)
    if len(hs) < A.shape[1]:
        raise FitError(f"{len(hs)} samples cannot determine {A.shape[1]} model terms")
    # scale columns so the rank test is meaningful
    norms = np.linalg.norm(A, axis=0)
    coef, _, rank, _ = np.linalg.lstsq(A / norms, gs, rcond=None)
    if rank < A.shape[1]:
        raise FitError("rank-deficient fit; spread the samples further")
    coef = coef / norms
    resid = float(np.sqrt(np.mean(np.abs(A @ coef - gs) ** 2)))
    if not np.all(np.isfinite(coef)) or not math.isfinite(resid):
        raise FitError("fit produced non-finite values")
    return {n: complex(c) for n, c in zip(names, coef)}, resid


def estimate_V(
    f: LogEvaluator,
    ray_angle: float = 0.0,
    h0: float = 0.2,
    ratio: float = 0.9,
    count: int = 30,
    M: int = 3,
    with_log: bool = True,
) -> AsymptoticEstimate:
    """Limit of h log f(e^{-h}) as h -> 0 with arg h = ``ray_angle``."""
    hs = schedule(ray_angle, h0, ratio, count)
    logs = track_logs(f, hs)
    gs = [h * L for h, L in zip(hs, logs)]
    coef, resid = fit_limit(hs, gs, M, with_log)
    return AsymptoticEstimate(coef["V"], ray_angle, tuple(zip(hs, gs)), resid, coef)


def root_of_unity_limit(
    f: LogEvaluator,
    ray_angle: float = 0.0,
    h0: float = 0.2,
    ratio: float = 0.9,
    count: int = 30,
    M: int = 3,
) -> tuple[AsymptoticEstimate, AsymptoticEstimate]:
    """Fit tau log f(e^{2 pi i tau}) for tau -> 0, where h = -2 pi i tau.

    The tau-limit W corresponds to iV/(2 pi); tau = 1/N recovers the limit
    along roots of unity.  Returns (tau estimate, h estimate) built from the
    same evaluations so the two can be compared.
    """
    hs = schedule(ray_angle, h0, ratio, count)
    logs = track_logs(f, hs)
    taus = [1j * h / TWO_PI for h in hs]
    G = [t * L for t, L in zip(taus, logs)]
    coef_t, res_t = fit_limit(taus, G, M)
    tau_est = AsymptoticEstimate(coef_t["V"], cmath.phase(taus[0]), tuple(zip(taus, G)), res_t, coef_t)
    gs = [h * L for h, L in zip(hs, logs)]
    coef_h, res_h = fit_limit(hs, gs, M)
    h_est = AsymptoticEstimate(coef_h["V"], ray_angle, tuple(zip(hs, gs)), res_h, coef_h)
    return tau_est, h_est
