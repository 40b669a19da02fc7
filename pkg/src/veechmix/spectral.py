"""Numerical spectral diagnostics and the horizontal-vertical surface analytics.

Everything here runs in floating point on long single orbits, seeded so
that reruns are bit-identical.  The numbers cross-check the exact verdicts
of :mod:`veechmix.weakmix`; they prove nothing on their own.

Decay thresholds used by the tests and the CLI are heuristics.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

import numpy as np
from numba import njit

from .errors import BadConvergent, BadParameters, DataError, SingularOrbit
from .exactnum import FieldElement, continued_fraction_convergents, rank_over_q

TWO_PI = 2.0 * math.pi
HEURISTIC_NOTE = "decay thresholds are heuristic; a finite orbit cannot certify absence of eigenvalues"


# -- observables ------------------------------------------------------------------

@dataclass(frozen=True)
class Observable:
    """Function on the interval ``[0, L)`` of an IET (or on an HV chart).

    ``fourier``: ``e(j x / L)``; ``indicator``: 1 on ``[lo, hi)``;
    ``constant``: ``value``; ``chart``: ``e(j x + k y)`` on surface
    coordinates.  ``mean_zero`` subtracts the exact Lebesgue mean.
    """

    kind: str
    j: int = 0
    k: int = 0
    lo: float = 0.0
    hi: float = 0.0
    value: complex = 1.0
    mean_zero: bool = False

    @classmethod
    def fourier(cls, j: int, mean_zero: bool = False) -> "Observable":
        return cls("fourier", j=j, mean_zero=mean_zero)

    @classmethod
    def indicator(cls, lo: float, hi: float, mean_zero: bool = False) -> "Observable":
        if not lo < hi:
            raise DataError("indicator needs lo < hi")
        return cls("indicator", lo=float(lo), hi=float(hi), mean_zero=mean_zero)

    @classmethod
    def constant(cls, value: complex = 1.0) -> "Observable":
        return cls("constant", value=complex(value))

    @classmethod
    def chart(cls, j: int, k: int) -> "Observable":
        return cls("chart", j=j, k=k)

    @classmethod
    def parse(cls, text: str) -> "Observable":
        """``fourier:J``, ``indicator:LO:HI``, ``const:C``; suffix ``:0`` centres it."""
        parts = text.split(":")
        centred = len(parts) > 1 and parts[-1] == "0" and parts[0] != "const"
        if centred:
            parts = parts[:-1]
        try:
            if parts[0] == "fourier":
                return cls.fourier(int(parts[1]), centred)
            if parts[0] == "indicator":
                return cls.indicator(float(Fraction(parts[1])), float(Fraction(parts[2])), centred)
            if parts[0] == "const":
                return cls.constant(complex(parts[1]) if len(parts) > 1 else 1.0)
        except (IndexError, ValueError, ZeroDivisionError) as exc:
            raise DataError(f"bad observable {text!r}: {exc}") from exc
        raise DataError(f"unknown observable kind {parts[0]!r}")

    def raw_mean(self, total: float) -> complex:
        if self.kind == "fourier":
            return 1.0 + 0j if self.j == 0 else 0j
        if self.kind == "indicator":
            lo, hi = max(self.lo, 0.0), min(self.hi, total)
            return complex(max(hi - lo, 0.0) / total)
        if self.kind == "constant":
            return self.value
        raise DataError("chart observables have no interval mean")

    def weighted_mean(self, lefts, lengths, weights, total: float) -> complex:
        """Mean against the measure with density ``weights[j]`` on interval ``j``."""
        num = 0j
        for a, lam, w in zip(lefts, lengths, weights):
            num += w * self._integral(a, a + lam, total)
        den = sum(lam * w for lam, w in zip(lengths, weights))
        return num / den

    def _integral(self, a: float, b: float, total: float) -> complex:
        if self.kind == "fourier":
            if self.j == 0:
                return complex(b - a)
            c = TWO_PI * self.j / total
            return (cmath.exp(1j * c * b) - cmath.exp(1j * c * a)) / (1j * c)
        if self.kind == "indicator":
            return complex(max(min(b, self.hi) - max(a, self.lo), 0.0))
        if self.kind == "constant":
            return self.value * (b - a)
        raise DataError("chart observables have no interval mean")

    def evaluate(self, xs: np.ndarray, total: float) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if self.kind == "fourier":
            out = np.exp(1j * TWO_PI * self.j * xs / total)
        elif self.kind == "indicator":
            out = ((xs >= self.lo) & (xs < self.hi)).astype(complex)
        elif self.kind == "constant":
            out = np.full(xs.shape, self.value, dtype=complex)
        else:
            raise DataError("chart observables need surface coordinates")
        if self.mean_zero:
            out = out - self.raw_mean(total)
        return out

    def chart_value(self, x: float, y: float, period: float = 1.0) -> complex:
        return cmath.exp(1j * TWO_PI * (self.j * x + self.k * y) / period)

    @property
    def is_mean_zero(self) -> bool:
        return self.mean_zero


# -- kernels ------------------------------------------------------------------

@njit(cache=True)
def _iet_orbit(left, trans, total, x, n):
    pts = np.empty(n)
    idx = np.empty(n, dtype=np.int64)
    m = left.shape[0]
    for k in range(n):
        j = np.searchsorted(left, x, side="right") - 1
        if j < 0:
            j = 0
        if j >= m:
            j = m - 1
        pts[k] = x
        idx[k] = j
        x = x + trans[j]
        if x >= total or x < 0.0:
            x = x % total
    return pts, idx


@njit(cache=True)
def _special_flow_samples(left, trans, roof, total, x, s, dt, n):
    """Base points of the special flow under ``roof`` at times ``0, dt, 2 dt, ...``."""
    pts = np.empty(n)
    m = left.shape[0]
    j = np.searchsorted(left, x, side="right") - 1
    if j < 0:
        j = 0
    if j >= m:
        j = m - 1
    for k in range(n):
        pts[k] = x
        s += dt
        while s >= roof[j]:
            s -= roof[j]
            x = x + trans[j]
            if x >= total or x < 0.0:
                x = x % total
            j = np.searchsorted(left, x, side="right") - 1
            if j < 0:
                j = 0
            if j >= m:
                j = m - 1
    return pts


def _float_iet(iet):
    left, trans, total = iet.float_data()
    return np.asarray(left, dtype=float), np.asarray(trans, dtype=float), float(total)


def iet_orbit(iet, x0: float, n: int):
    left, trans, total = _float_iet(iet)
    return _iet_orbit(left, trans, total, float(x0), int(n))


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(None if seed is None else int(seed) & 0xFFFFFFFFFFFFFFFF)


def _crosscorr(fs: np.ndarray, gs: np.ndarray, max_lag: int, count: int) -> np.ndarray:
    """``C(n) = (1/count) sum_{k<count} f[k+n] conj(g[k])`` for ``n <= max_lag`` by FFT."""
    size = 1 << int(math.ceil(math.log2(len(fs) + count)))
    g0 = np.zeros(size, dtype=complex)
    g0[:count] = gs[:count]
    F = np.fft.fft(fs, size)
    G = np.fft.fft(g0, size)
    full = np.fft.ifft(F * np.conj(G))
    return full[:max_lag + 1] / count


# -- reports ------------------------------------------------------------------

@dataclass(frozen=True)
class MixingReport:
    lags: list[int]
    correlations: np.ndarray
    cesaro: np.ndarray
    means: tuple[complex, complex]
    sample_count: int
    seed: Optional[int]
    dt: Optional[float] = None
    spread: Optional[np.ndarray] = None
    notes: tuple[str, ...] = (HEURISTIC_NOTE,)

    def to_json(self) -> dict:
        def cplx(z):
            return [float(z.real), float(z.imag)]
        return {
            "lags": list(self.lags),
            "correlations": [cplx(z) for z in self.correlations],
            "cesaro": [float(x) for x in self.cesaro],
            "means": [cplx(z) for z in self.means],
            "sample_count": self.sample_count,
            "seed": self.seed,
            "dt": self.dt,
            "notes": list(self.notes),
        }

    def csv_rows(self):
        yield ("lag", "re_C", "im_C", "abs_C", "cesaro_M")
        for n, c, mval in zip(self.lags, self.correlations, np.concatenate([[np.nan], self.cesaro])):
            yield (n, float(c.real), float(c.imag), float(abs(c)), "" if np.isnan(mval) else float(mval))


def birkhoff_correlation(iet, f: Observable, g: Observable, max_lag: int, samples: int,
                         seed=None, restarts: int = 1) -> MixingReport:
    """Correlations of the section map along single long orbits.

    ``C(n) = (1/M) sum_k f(T^{n+k} x0) conj(g(T^k x0))`` with ``M = samples``;
    ``restarts`` independent starts are averaged and their spread kept.
    """
    if max_lag < 1 or samples < 1:
        raise DataError("max_lag and samples must be >= 1")
    left, trans, total = _float_iet(iet)
    rng = _rng(seed)
    runs = []
    for _ in range(max(1, restarts)):
        x0 = float(rng.random() * total)
        pts, _ = _iet_orbit(left, trans, total, x0, samples + max_lag)
        fs = f.evaluate(pts, total)
        gs = g.evaluate(pts, total)
        runs.append(_crosscorr(fs, gs, max_lag, samples))
    runs = np.array(runs)
    corr = runs.mean(axis=0)
    means = (f.evaluate(np.array([0.0]), total)[0] * 0 + _mean(f, total),
             _mean(g, total))
    ces = cesaro_mixing_indicator(corr, means)
    return MixingReport(list(range(max_lag + 1)), corr, ces, means, samples,
                        seed, spread=runs.std(axis=0) if len(runs) > 1 else None)


def _mean(f: Observable, total: float) -> complex:
    m = f.raw_mean(total)
    return 0j if f.mean_zero else m


def cesaro_mixing_indicator(correlations: Sequence[complex], means) -> np.ndarray:
    """``M(N) = (1/N) sum_{n<N} |C(n) - <f> conj(<g>)|`` for ``N = 1..len``."""
    c = np.asarray(correlations, dtype=complex)
    base = complex(means[0]) * complex(means[1]).conjugate()
    dev = np.abs(c - base)
    return np.cumsum(dev) / np.arange(1, len(dev) + 1)


def special_flow_correlation(iet, roof: Sequence, f: Observable, max_lag: int, samples: int,
                             dt: float = 1.0, seed=None) -> MixingReport:
    """Autocorrelation of the special flow under ``roof`` sampled every ``dt``.

    ``f`` depends on the base point only.  The start is drawn from the
    flow-invariant measure (base density proportional to the roof).
    """
    if max_lag < 1 or samples < 1:
        raise DataError("max_lag and samples must be >= 1")
    left, trans, total = _float_iet(iet)
    roof = np.asarray([float(r) for r in roof], dtype=float)
    if roof.shape[0] != left.shape[0] or np.any(roof <= 0):
        raise DataError("roof needs one positive height per interval")
    lengths = np.diff(np.append(left, total))
    rng = _rng(seed)
    w = lengths * roof
    j = int(rng.choice(len(w), p=w / w.sum()))
    x0 = float(left[j] + rng.random() * lengths[j])
    s0 = float(rng.random() * roof[j])
    pts = _special_flow_samples(left, trans, roof, total, x0, s0, float(dt), samples + max_lag)
    fs = f.evaluate(pts, total)
    corr = _crosscorr(fs, fs, max_lag, samples)
    mu = 0j if f.mean_zero else f.weighted_mean(left, lengths, roof, total)
    if f.mean_zero:
        # centring used the Lebesgue mean; recentre on the flow measure
        mu = f.weighted_mean(left, lengths, roof, total) - f.raw_mean(total)
    ces = cesaro_mixing_indicator(corr, (mu, mu))
    return MixingReport(list(range(max_lag + 1)), corr, ces, (mu, mu), samples, seed, dt=dt)


# -- Weyl sums ----------------------------------------------------------------

def weyl_sum(iet, f: Observable, alpha: float, N: int, samples: int = 1, seed=None,
             times: Optional[Sequence] = None) -> float:
    """Mean over starts of ``|(1/N) sum_{n<N} e(-alpha tau_n) f(T^n x)|``.

    ``tau_n = n`` by default; with ``times`` it is the accumulated return
    time ``t_{j_0} + ... + t_{j_{n-1}}``, the eigenvalue test for the flow.
    """
    if N < 1:
        raise DataError("N must be >= 1")
    left, trans, total = _float_iet(iet)
    rng = _rng(seed)
    t = None if times is None else np.asarray([float(x) for x in times], dtype=float)
    acc = 0.0
    for _ in range(max(1, samples)):
        x0 = float(rng.random() * total)
        pts, idx = _iet_orbit(left, trans, total, x0, N)
        if t is None:
            tau = np.arange(N, dtype=float)
        else:
            steps = t[idx]
            tau = np.concatenate([[0.0], np.cumsum(steps[:-1])])
        phase = np.exp(-1j * TWO_PI * np.mod(alpha * tau, 1.0))
        acc += abs(np.mean(phase * f.evaluate(pts, total)))
    return acc / max(1, samples)


def weyl_scan(iet, f: Observable, alphas: Sequence[float], N: int, samples: int = 1,
              seed=None, times=None) -> list[tuple[float, float]]:
    return [(float(a), weyl_sum(iet, f, float(a), N, samples, seed, times)) for a in alphas]


# -- horizontal-vertical surface ------------------------------------------------

ALMOST_INTEGRABLE = "AlmostIntegrable"
WEAK_MIXING = "WeakMixing"


def _as_fe(x, like: Optional[FieldElement] = None) -> FieldElement:
    if isinstance(x, FieldElement):
        return x
    from .exactnum import RealBasis

    basis = like.basis if like is not None else RealBasis.rational()
    return basis.const(Fraction(x))


def hv_classify(a, b) -> str:
    """``AlmostIntegrable`` when ``a/b`` is rational, ``WeakMixing`` otherwise (exact)."""
    a = _as_fe(a, b if isinstance(b, FieldElement) else None)
    b = _as_fe(b, a)
    if a.basis != b.basis:
        raise BadParameters("a and b must share a basis")
    if a.sign() <= 0 or b.sign() <= 0 or (b - a).sign() <= 0:
        raise BadParameters("need 0 < a < b")
    return ALMOST_INTEGRABLE if rank_over_q([a.coords, b.coords]) == 1 else WEAK_MIXING


def _direction_cos_sin(theta):
    """``(cos, sin, exact)``; exact when the vector already has unit length."""
    vec = theta.vector if hasattr(theta, "vector") else None
    if vec is None:
        th = float(theta)
        return math.cos(th), math.sin(th), False
    dx, dy = vec
    if isinstance(dx, FieldElement) and dx.is_rational() and dy.is_rational():
        n2 = dx.coords[0] ** 2 + dy.coords[0] ** 2
        if n2 == 1:
            return dx.coords[0], dy.coords[0], True
    fx, fy = float(dx), float(dy)
    r = math.hypot(fx, fy)
    return fx / r, fy / r, False


def hv_eigenvalues(theta, j_range: Sequence[int], k_range: Sequence[int],
                   period: float = 1) -> list[tuple[int, int, object]]:
    """``alpha_jk = (j cos(theta) + k sin(theta)) / period`` on the grid.

    ``theta`` is an angle in radians or a direction; unit rational
    directions give exact rationals.
    """
    c, s, exact = _direction_cos_sin(theta)
    out = []
    for j in j_range:
        for k in k_range:
            if exact:
                out.append((j, k, (j * c + k * s) / Fraction(period)))
            else:
                out.append((j, k, (j * float(c) + k * float(s)) / float(period)))
    return out


def _sample_point(surface, rng):
    polys = [[(float(x), float(y)) for x, y in p] for p in surface.polygons]
    areas = np.array([_shoelace(p) for p in polys])
    while True:
        p = int(rng.choice(len(polys), p=areas / areas.sum()))
        xs = [v[0] for v in polys[p]]
        ys = [v[1] for v in polys[p]]
        x = min(xs) + rng.random() * (max(xs) - min(xs))
        y = min(ys) + rng.random() * (max(ys) - min(ys))
        if _inside_float(polys[p], x, y):
            return x, y


def _shoelace(p) -> float:
    return 0.5 * sum(p[i][0] * p[(i + 1) % len(p)][1] - p[(i + 1) % len(p)][0] * p[i][1]
                     for i in range(len(p)))


def _inside_float(poly, x, y) -> bool:
    inside = False
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            if x1 + (y - y1) * (x2 - x1) / (y2 - y1) > x:
                inside = not inside
    return inside


def verify_hv_eigenfunction(surface, j: int, k: int, theta, sample_count: int = 100,
                            t_max: float = 50.0, seed=None, period: float = 1.0,
                            jk_grid: Optional[Sequence[tuple[int, int]]] = None) -> float:
    """Largest ``|f(phi^t p) - e(alpha t) f(p)|`` for ``f = e((jx + ky)/period)``.

    Start points are drawn uniformly on the surface; each trajectory is
    traced once in float mode and checked at its crossing times and at
    random times.  ``jk_grid`` checks several pairs on the same traces and
    returns the overall maximum.
    """
    from .flow import Direction, trace

    rng = _rng(seed)
    c, s, _ = _direction_cos_sin(theta)
    c, s = float(c), float(s)
    direction = Direction((c, s))
    pairs = list(jk_grid) if jk_grid is not None else [(j, k)]
    worst = 0.0
    done = 0
    attempts = 0
    while done < sample_count:
        attempts += 1
        if attempts > 20 * sample_count:
            raise SingularOrbit("too many start points hit cone points")
        x, y = _sample_point(surface, rng)
        try:
            traj = trace(surface, (x, y), direction, t_max, mode="float")
        except SingularOrbit:
            continue
        ts = [float(e.time) for e in traj.events if float(e.time) <= t_max]
        ts += list(rng.random(8) * t_max)
        for t in ts:
            _, (px, py) = traj.position(t)
            for jj, kk in pairs:
                alpha = (jj * c + kk * s) / period
                f0 = cmath.exp(1j * TWO_PI * (jj * x + kk * y) / period)
                ft = cmath.exp(1j * TWO_PI * (jj * px + kk * py) / period)
                worst = max(worst, abs(ft - cmath.exp(1j * TWO_PI * alpha * t) * f0))
        done += 1
    return worst


def fundamental_rectangle_count(n_i: int, m_i: int, b=None):
    """``N_i = m_i^2 - n_i^2`` squares of side ``b / m_i`` (side only if ``b`` given)."""
    if not (isinstance(n_i, int) and isinstance(m_i, int)):
        raise BadConvergent("convergent entries must be integers")
    if not 0 < n_i < m_i or gcd(n_i, m_i) != 1:
        raise BadConvergent(f"need coprime 0 < n < m, got ({n_i}, {m_i})")
    count = m_i * m_i - n_i * n_i
    if b is None:
        return count
    side = b / m_i if not isinstance(b, FieldElement) else b.scale(Fraction(1, m_i))
    return count, side


def rectangle_counts(ratio, count: int) -> list[tuple[int, int, int]]:
    """``(n_i, m_i, N_i)`` along convergents ``n_i/m_i`` of ``ratio = a/b < 1``.

    Convergents with ``n_i = m_i`` (the ``1/1`` term of ratios above 1/2)
    do not describe a rectangle and are skipped.
    """
    out = []
    for n, m in continued_fraction_convergents(ratio, count + 1):
        if 0 < n < m:
            out.append((n, m, fundamental_rectangle_count(n, m)))
        if len(out) == count:
            break
    return out
