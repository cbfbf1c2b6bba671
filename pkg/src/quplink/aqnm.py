"""Additive quantization noise model for per-antenna low-resolution ADCs.

A b-bit ADC on antenna m is linearized as y_q = alpha_m * y + n_q with
gain alpha_m = 1 - rho_m, where rho_m is the distortion factor (inverse
signal-to-quantization-noise ratio) of the quantizer, and n_q is additive
noise uncorrelated with y.  Conditioned on the channel G the noise
covariance is diagonal:

    R_nq = Lam (I - Lam) diag(p_u G G^H + I),    Lam = diag(alpha).

Averaging the channel out gives the realization-independent diagonal
R_nq_bar = Lam (I - Lam) (p_u tr(D) + 1), the quantity receivers can use
without instantaneous knowledge of G.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, LargeScaleProfile

#: Distinguished resolution meaning an ideal (unquantized) ADC.
INFINITE = math.inf

# Distortion factors of the optimal scalar uniform quantizer at low
# resolutions; beyond 5 bits the asymptotic (pi*sqrt(3)/2) * 2^(-2b) is
# accurate to the shown precision.
RHO_TABLE = {1: 0.3634, 2: 0.1175, 3: 0.03454, 4: 0.009497, 5: 0.002499}

_RHO_ASYMPTOTIC_COEF = math.pi * math.sqrt(3.0) / 2.0


def rho_for_bits(b) -> float:
    """Distortion factor rho for a b-bit ADC.

    b must be a positive integer or INFINITE.  Tabulated values cover
    b <= 5; the uniform-quantizer asymptotic extends the table above that,
    and INFINITE maps to exactly 0.
    """
    if b == INFINITE:
        return 0.0
    if isinstance(b, bool) or not isinstance(b, (int, np.integer)):
        raise ValueError(f"resolution must be a positive integer or INFINITE, got {b!r}")
    if b < 1:
        raise ValueError(f"resolution must be at least 1 bit, got {b}")
    if b <= 5:
        return RHO_TABLE[int(b)]
    return _RHO_ASYMPTOTIC_COEF * 2.0 ** (-2 * int(b))


@dataclass
class AdcProfile:
    """Per-antenna resolutions with the derived distortions and gains.

    alphas[m] = 1 - rhos[m] lies in (0, 1], equal to 1 exactly for an
    ideal ADC.  Lam = diag(alphas) is the linear gain matrix.
    """

    bits: tuple
    rhos: np.ndarray
    alphas: np.ndarray

    @classmethod
    def from_bits(cls, bits) -> "AdcProfile":
        bits = tuple(bits)
        if len(bits) == 0:
            raise ValueError("need at least one ADC")
        rhos = np.array([rho_for_bits(b) for b in bits])
        return cls(bits=bits, rhos=rhos, alphas=1.0 - rhos)

    @classmethod
    def uniform(cls, b, M: int) -> "AdcProfile":
        return cls.from_bits([b] * M)

    @property
    def num_antennas(self) -> int:
        return len(self.bits)

    @property
    def ideal(self) -> bool:
        return bool(np.all(self.alphas == 1.0))


def gain_matrix(adc: AdcProfile) -> np.ndarray:
    """Dense M x M gain matrix Lam = diag(1 - rho_m)."""
    return np.diag(adc.alphas)


@dataclass
class QuantNoiseCov:
    """Diagonal of a quantization-noise covariance (linear power).

    The covariance is diagonal by construction; only the diagonal is ever
    stored.
    """

    diag_entries: np.ndarray

    def __post_init__(self):
        self.diag_entries = np.asarray(self.diag_entries, dtype=float)
        if np.any(self.diag_entries < 0.0):
            raise ValueError("covariance diagonal must be nonnegative")


def quant_noise_cov(chan: ChannelRealization, adc: AdcProfile, p_u: float) -> QuantNoiseCov:
    """Per-realization noise covariance diag of Lam (I - Lam) diag(p_u G G^H + I)."""
    if p_u <= 0.0:
        raise ValueError("p_u must be positive")
    if chan.G.shape[0] != adc.num_antennas:
        raise ValueError("channel and ADC profile disagree on antenna count")
    row_power = np.sum(np.abs(chan.G) ** 2, axis=1)
    a = adc.alphas
    return QuantNoiseCov(diag_entries=a * (1.0 - a) * (p_u * row_power + 1.0))


def avg_quant_noise_cov(adc: AdcProfile, profile: LargeScaleProfile, p_u: float) -> QuantNoiseCov:
    """Channel-averaged noise covariance Lam (I - Lam) (p_u tr(D) + 1)."""
    if p_u <= 0.0:
        raise ValueError("p_u must be positive")
    a = adc.alphas
    scale = p_u * profile.trace_d + 1.0
    return QuantNoiseCov(diag_entries=a * (1.0 - a) * scale)


def apply_aqnm(y: np.ndarray, adc: AdcProfile, rnq: QuantNoiseCov,
               rng: np.random.Generator) -> np.ndarray:
    """Pass a received vector through the linearized quantizer model.

    Returns Lam y + n_q with n_q zero-mean complex Gaussian of diagonal
    covariance rnq (variance split equally between real and imaginary
    parts).  Demonstration path only; rate computations use covariances
    analytically and never sample n_q.
    """
    y = np.asarray(y)
    if y.shape[0] != adc.num_antennas:
        raise ValueError("length of y must match the number of ADCs")
    half = rnq.diag_entries / 2.0
    noise = np.sqrt(half) * (rng.standard_normal(y.shape[0]) + 1j * rng.standard_normal(y.shape[0]))
    return adc.alphas * y + noise
