"""Exact sampling of fractional Gaussian noise and two-sided fBM paths.

Fractional Brownian motion B with roughness exponent ``alpha`` in (0, 2)
(``alpha = 2H`` for Hurst index H) is the centered Gaussian process with

    Cov(B(t), B(s)) = (|t|^alpha + |s|^alpha - |t - s|^alpha) / 2,

so its unit-spaced increments (fractional Gaussian noise, fGn) are
stationary with autocovariance

    gamma(k) = (|k+1|^alpha - 2|k|^alpha + |k-1|^alpha) / 2.

The sampler embeds the Toeplitz covariance of fGn in a circulant matrix
diagonalized by the FFT (Davies-Harte method), which is exact and costs
O(m log m) per draw. A dense Cholesky factorization of the same covariance
is kept as a slow oracle for cross-validation; it is never used in the
estimation pipeline.

Paths are always simulated on the unit grid and rescaled by self-similarity
(B(delta * k) has the law of delta^(alpha/2) * B(k)), so one spectrum per
(alpha, length) serves every grid spacing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

__all__ = [
    "FgnSpec",
    "CirculantSpectrum",
    "PathGrid",
    "fgn_autocovariance",
    "circulant_spectrum",
    "sample_fgn",
    "cholesky_sample",
    "sample_two_sided_path",
    "rescale_path",
    "spectrum_to_json",
    "spectrum_from_json",
    "save_spectrum",
    "load_spectrum",
]

# Relative floor below which a negative FFT eigenvalue is treated as roundoff
# and clamped; anything more negative is a genuine embedding failure.
_EIGENVALUE_CLAMP_REL = 1e-9

_CHOLESKY_MAX_N = 4096


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"alpha must lie strictly in (0, 2), got {alpha}")
    return alpha


@dataclass(frozen=True)
class FgnSpec:
    """Roughness exponent and length of a unit-spaced fGn draw."""

    alpha: float
    n: int

    def __post_init__(self):
        _check_alpha(self.alpha)
        if int(self.n) < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")


@dataclass(frozen=True)
class CirculantSpectrum:
    """FFT eigenvalues of the circulant extension of the fGn covariance.

    ``eigenvalues`` has length ``m`` (even, a power of two >= 2(n-1)) and is
    the DFT of the periodized autocovariance sequence
    gamma(0), ..., gamma(m/2), gamma(m/2 - 1), ..., gamma(1).  All entries
    are nonnegative; inverting the transform recovers gamma(0..m/2).
    Instances are immutable and safe to share across concurrent samplers.
    """

    alpha: float
    m: int
    eigenvalues: np.ndarray

    def max_draw_length(self) -> int:
        """Longest exact fGn draw this embedding supports (m/2 + 1)."""
        return self.m // 2 + 1


@dataclass
class PathGrid:
    """Values of a two-sided fBM path on a uniform grid anchored at 0.

    ``values[neg_count + k]`` is B(k * delta) for k = -neg_count..pos_count;
    the anchor ``values[neg_count]`` is exactly 0.
    """

    alpha: float
    delta: float
    neg_count: int
    pos_count: int
    values: np.ndarray

    def __post_init__(self):
        _check_alpha(self.alpha)
        if self.delta <= 0.0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.neg_count < 0 or self.pos_count < 0:
            raise ValueError("grid point counts must be nonnegative")
        expected = self.neg_count + self.pos_count + 1
        if len(self.values) != expected:
            raise ValueError(
                f"values has length {len(self.values)}, expected {expected}"
            )
        if self.values[self.neg_count] != 0.0:
            raise ValueError("path value at t = 0 must be exactly 0")


def fgn_autocovariance(alpha: float, k: int) -> float:
    """Autocovariance gamma(k) of unit-spaced fGn at integer lag k >= 0.

    gamma(0) = 1 for every alpha; for alpha = 1 all higher lags vanish
    (independent Brownian increments).
    """
    alpha = _check_alpha(alpha)
    k = int(k)
    if k < 0:
        raise ValueError(f"lag must be nonnegative, got {k}")
    if k == 0:
        return 1.0
    return 0.5 * ((k + 1.0) ** alpha - 2.0 * k**alpha + (k - 1.0) ** alpha)


def _autocovariances(alpha: float, kmax: int) -> np.ndarray:
    """gamma(0..kmax) in one vectorized pass."""
    k = np.arange(kmax + 1, dtype=float)
    g = 0.5 * ((k + 1.0) ** alpha - 2.0 * k**alpha + np.abs(k - 1.0) ** alpha)
    g[0] = 1.0
    return g


def _next_pow2(x: int) -> int:
    return 1 << (x - 1).bit_length()


def circulant_spectrum(alpha: float, n: int) -> CirculantSpectrum:
    """Eigenvalues of the circulant embedding of gamma(0..n-1).

    The embedding length m is the smallest power of two >= 2(n-1); the
    circulant first row is the true autocovariance out to lag m/2 and its
    mirror, so draws of length up to m/2 + 1 are exact.  For fGn the
    eigenvalues are nonnegative in theory; tiny negative roundoff is clamped
    to zero and anything below -1e-9 (relative) raises, since it would
    indicate a bug rather than an unlucky covariance.
    """
    alpha = _check_alpha(alpha)
    n = int(n)
    if n < 2:
        raise ValueError(f"embedding needs n >= 2 increments, got {n}")
    m = _next_pow2(2 * (n - 1))
    half = m // 2
    g = _autocovariances(alpha, half)
    first_row = np.concatenate([g, g[half - 1 : 0 : -1]])
    lam = np.fft.fft(first_row).real
    floor = -_EIGENVALUE_CLAMP_REL * lam.max()
    if lam.min() < floor:
        raise RuntimeError(
            f"circulant embedding failed for alpha={alpha}, n={n}: "
            f"eigenvalue {lam.min():.3e} below clamp floor {floor:.3e}"
        )
    np.clip(lam, 0.0, None, out=lam)
    lam.flags.writeable = False
    return CirculantSpectrum(alpha=alpha, m=m, eigenvalues=lam)


@lru_cache(maxsize=64)
def _cached_spectrum(alpha: float, n: int) -> CirculantSpectrum:
    return circulant_spectrum(alpha, n)


def _fgn_from_normals(spectrum: CirculantSpectrum, z: np.ndarray) -> np.ndarray:
    """Map (batch, m) standard normals to (batch, m) exact fGn sequences.

    Builds the Hermitian half-spectrum from the first m/2+1 normals (real
    parts) and the remaining m/2-1 (imaginary parts), then inverts with a
    real FFT. Row i depends only on z[i], so batching cannot change values.
    """
    lam = spectrum.eigenvalues
    m = spectrum.m
    half = m // 2
    w = np.empty((z.shape[0], half + 1), dtype=np.complex128)
    w[:, 0] = np.sqrt(lam[0]) * z[:, 0]
    w[:, half] = np.sqrt(lam[half]) * z[:, half]
    mid = np.sqrt(0.5 * lam[1:half])
    w[:, 1:half] = mid * (z[:, 1:half] + 1j * z[:, half + 1 :])
    return np.fft.irfft(w, n=m, axis=1) * math.sqrt(m)


def sample_fgn(
    spectrum: CirculantSpectrum, rng: np.random.Generator, n: int | None = None
) -> np.ndarray:
    """Draw one exact stationary fGn sequence of length n from the spectrum.

    Consumes exactly ``spectrum.m`` standard normals from ``rng``.  ``n``
    defaults to the longest exact length the embedding supports.
    """
    nmax = spectrum.max_draw_length()
    if n is None:
        n = nmax
    n = int(n)
    if not 1 <= n <= nmax:
        raise ValueError(f"draw length must be in [1, {nmax}], got {n}")
    z = rng.standard_normal(spectrum.m)
    return _fgn_from_normals(spectrum, z[None, :])[0, :n]


def cholesky_sample(alpha: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Exact fGn draw by dense Cholesky factorization of the Toeplitz covariance.

    O(n^3) cross-validation oracle for :func:`sample_fgn`; capped at
    n <= 4096 because it exists only to check the FFT sampler.
    """
    alpha = _check_alpha(alpha)
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n > _CHOLESKY_MAX_N:
        raise ValueError(
            f"cholesky_sample is an oracle capped at n <= {_CHOLESKY_MAX_N}, got {n}"
        )
    cov = scipy.linalg.toeplitz(_autocovariances(alpha, n - 1))
    try:
        lower = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(
            f"fGn covariance not numerically positive definite for "
            f"alpha={alpha}, n={n}"
        ) from exc
    return lower @ rng.standard_normal(n)


def _two_sided_values(fgn: np.ndarray, neg_count: int) -> np.ndarray:
    """Cumulate a (batch, n) increment block into (batch, n+1) path values.

    The running sum is anchored so the column at index ``neg_count`` is
    exactly zero; entries left of the anchor are then the negated backward
    sums, which keeps the two sides driven by one stationary sequence (they
    are dependent for alpha != 1).
    """
    batch, n = fgn.shape
    values = np.empty((batch, n + 1))
    values[:, 0] = 0.0
    np.cumsum(fgn, axis=1, out=values[:, 1:])
    if neg_count:
        values -= values[:, neg_count][:, None]
        values[:, neg_count] = 0.0
    return values


def sample_two_sided_path(
    alpha: float, neg_count: int, pos_count: int, rng: np.random.Generator
) -> PathGrid:
    """Sample a two-sided fBM path on the unit grid -neg_count..pos_count.

    One stationary fGn sequence of length ``neg_count + pos_count`` is drawn
    and cumulated around the t = 0 anchor, so the resulting grid process has
    exactly the fBM covariance: Var B(k) = |k|^alpha with stationary
    increments.  Returns a :class:`PathGrid` with ``delta = 1``.
    """
    alpha = _check_alpha(alpha)
    neg_count, pos_count = int(neg_count), int(pos_count)
    if neg_count < 0 or pos_count < 0 or neg_count + pos_count < 1:
        raise ValueError("need at least one increment across both sides")
    n = neg_count + pos_count
    if n == 1:
        fgn = rng.standard_normal(1)  # gamma(0) = 1: a single N(0,1)
    else:
        fgn = sample_fgn(_cached_spectrum(alpha, n), rng, n)
    values = _two_sided_values(fgn[None, :], neg_count)[0]
    return PathGrid(
        alpha=alpha,
        delta=1.0,
        neg_count=neg_count,
        pos_count=pos_count,
        values=values,
    )


def rescale_path(path: PathGrid, delta: float) -> PathGrid:
    """Turn a unit-grid path into a delta-grid path by self-similarity.

    B(delta * k) has the law of delta^(alpha/2) * B(k), so rescaling amounts
    to one multiplication; grid point k then represents time k * delta.
    """
    delta = float(delta)
    if delta <= 0.0:
        raise ValueError(f"delta must be positive, got {delta}")
    if path.delta != 1.0:
        raise ValueError(f"expected a unit-spacing path, got delta={path.delta}")
    return PathGrid(
        alpha=path.alpha,
        delta=delta,
        neg_count=path.neg_count,
        pos_count=path.pos_count,
        values=path.values * delta ** (path.alpha / 2.0),
    )


def spectrum_to_json(spectrum: CirculantSpectrum) -> str:
    """Serialize a spectrum to the on-disk JSON format {alpha, m, eigenvalues}."""
    return json.dumps(
        {
            "alpha": spectrum.alpha,
            "m": spectrum.m,
            "eigenvalues": spectrum.eigenvalues.tolist(),
        }
    )


def spectrum_from_json(text: str) -> CirculantSpectrum:
    """Inverse of :func:`spectrum_to_json`; round-trips bit-exactly."""
    obj = json.loads(text)
    lam = np.asarray(obj["eigenvalues"], dtype=float)
    if len(lam) != int(obj["m"]):
        raise ValueError("eigenvalue count does not match embedding length m")
    lam.flags.writeable = False
    return CirculantSpectrum(alpha=float(obj["alpha"]), m=int(obj["m"]), eigenvalues=lam)


def save_spectrum(spectrum: CirculantSpectrum, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(spectrum_to_json(spectrum))


def load_spectrum(path) -> CirculantSpectrum:
    with open(path, encoding="ascii") as fh:
        return spectrum_from_json(fh.read())
