"""Large-system closed forms for the quantization-aware MMSE uplink SE.

As M and K grow with fixed ratio, the per-user SINR of the
quantization-aware MMSE receiver concentrates around a deterministic
value built from three traces of a resolvent fixed point:

    S   = (sum_i beta_i Lam Lam^H / (1 + delta_i) + Z + theta I)^{-1},
    delta_k = beta_k tr(Lam Lam^H S),          Gamma1 = tr(Lam Lam^H S),
    Gamma2  = tr(Lam Lam^H S'),                Gamma3 = tr(Rbar_nq S'),

with S' the companion matrix capturing the derivative of S along
Theta = Lam Lam^H.  The asymptotic per-user rate is

    R_k = log2(1 + p_u beta_k Gamma1^2 /
               (p_u sum_{i != k} beta_i Gamma2 / (1 + beta_i Gamma1)^2
                + Gamma2 + Gamma3)).

Everything here is diagonal (Lam, Z, Theta, hence S and S'), so the
solver iterates on vectors; the assembled states expose dense Hermitian
matrices for inspection.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .aqnm import AdcProfile, QuantNoiseCov, avg_quant_noise_cov
from .channel import LargeScaleProfile
from .receiver import noise_shaping_diag

#: Relative tolerance on the fixed-point iterates.
DEFAULT_TOL = 1e-9
#: Iteration cap; generous for every regime of practical loading.
DEFAULT_MAX_ITER = 500

_CONDITION_REFINE_THRESHOLD = 1e8


class ConvergenceError(RuntimeError):
    """Fixed point or linear system failed to reach tolerance."""


@dataclass
class DetEqState:
    """Fixed-point state of the large-system analysis.

    Populated in two stages: the resolvent stage fills delta, S, and
    gamma1; the derivative stage fills delta_prime, S_prime, J, v, and
    Theta.  reg is the resolvent regularizer (1/p_u in the uplink use).
    """

    betas: np.ndarray
    lam2_diag: np.ndarray
    z_diag: np.ndarray
    reg: float
    delta: np.ndarray
    s_diag: np.ndarray
    gamma1: float
    iterations_used: int
    residual: float
    theta_diag: np.ndarray | None = None
    delta_prime: np.ndarray | None = None
    sprime_diag: np.ndarray | None = None
    J: np.ndarray | None = None
    v: np.ndarray | None = None
    j_spectral_radius: float | None = None

    @property
    def S(self) -> np.ndarray:
        return np.diag(self.s_diag)

    @property
    def S_prime(self) -> np.ndarray | None:
        if self.sprime_diag is None:
            return None
        return np.diag(self.sprime_diag)

    @property
    def Theta(self) -> np.ndarray | None:
        if self.theta_diag is None:
            return None
        return np.diag(self.theta_diag)

    @property
    def completed(self) -> bool:
        return self.sprime_diag is not None


def solve_gamma1(betas: np.ndarray, adc: AdcProfile, z_diag: np.ndarray, theta: float,
                 tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
                 ) -> tuple[DetEqState, float]:
    """Iterate the resolvent fixed point to its unique positive solution.

    Parameters
    ----------
    betas : (K,) array
        Large-scale gains; may be empty for the no-user limit.
    adc : AdcProfile
        Supplies the diagonal of Lam Lam^H.
    z_diag : (M,) array
        Diagonal of the noise-shaping term Z, entries >= 0.
    theta : float
        Regularizer, must be positive; the iteration starts from
        delta_k = 1/theta.
    tol, max_iter
        Convergence is declared when the max relative change of delta
        falls to tol or below.

    Returns
    -------
    (DetEqState, float)
        Partially populated state and Gamma1 = tr(Lam Lam^H S).

    Raises
    ------
    ConvergenceError
        If the tolerance is not met within max_iter iterations.
    """
    if theta <= 0.0:
        raise ValueError("theta must be positive")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    betas = np.asarray(betas, dtype=float)
    t = adc.alphas ** 2
    z_diag = np.asarray(z_diag, dtype=float)
    K = betas.size

    delta = np.full(K, 1.0 / theta)
    if K == 0:
        s = 1.0 / (z_diag + theta)
        g1 = float(np.sum(t * s))
        state = DetEqState(betas=betas, lam2_diag=t, z_diag=z_diag, reg=theta,
                           delta=delta, s_diag=s, gamma1=g1,
                           iterations_used=0, residual=0.0)
        return state, g1

    for it in range(1, max_iter + 1):
        s = 1.0 / (t * np.sum(betas / (1.0 + delta)) + z_diag + theta)
        g1 = float(np.sum(t * s))
        new_delta = betas * g1
        residual = float(np.max(np.abs(new_delta - delta) / np.maximum(np.abs(new_delta), 1e-300)))
        delta = new_delta
        if residual <= tol:
            state = DetEqState(betas=betas, lam2_diag=t, z_diag=z_diag, reg=theta,
                               delta=delta, s_diag=s, gamma1=g1,
                               iterations_used=it, residual=residual)
            return state, g1
    raise ConvergenceError(
        f"resolvent fixed point not converged after {max_iter} iterations, residual {residual:.3e}")


def solve_sprime(state: DetEqState, theta_diag: np.ndarray | None = None) -> DetEqState:
    """Complete the state with the derivative companion S'.

    theta_diag is the diagonal of the direction matrix Theta; defaults
    to Lam Lam^H, the direction every SE trace below uses.  Solves the
    K x K system (I - J) delta' = v directly, with one round of
    iterative refinement when the system is badly conditioned.
    """
    t = state.lam2_diag
    s = state.s_diag
    betas = state.betas
    delta = state.delta
    if theta_diag is None:
        theta_diag = t
    theta_diag = np.asarray(theta_diag, dtype=float)
    K = betas.size

    trace_tsts = float(np.sum(t * s * t * s))
    trace_tsxs = float(np.sum(t * s * theta_diag * s))
    if K == 0:
        state.theta_diag = theta_diag
        state.delta_prime = np.empty(0)
        state.J = np.empty((0, 0))
        state.v = np.empty(0)
        state.j_spectral_radius = 0.0
        state.sprime_diag = s * theta_diag * s
        return state

    J = np.outer(betas, betas) * trace_tsts / (1.0 + delta)[None, :] ** 2
    v = betas * trace_tsxs
    sr = float(np.max(np.abs(np.linalg.eigvals(J))))
    if sr >= 1.0:
        raise ConvergenceError(
            f"derivative system is not contractive (spectral radius {sr:.6f} >= 1)")
    lhs = np.eye(K) - J
    delta_prime = np.linalg.solve(lhs, v)
    if np.linalg.cond(lhs) > _CONDITION_REFINE_THRESHOLD:
        for _ in range(2):
            r = v - lhs @ delta_prime
            delta_prime = delta_prime + np.linalg.solve(lhs, r)

    correction = float(np.sum(betas * delta_prime / (1.0 + delta) ** 2))
    state.theta_diag = theta_diag
    state.delta_prime = delta_prime
    state.J = J
    state.v = v
    state.j_spectral_radius = sr
    state.sprime_diag = s * theta_diag * s + s * t * correction * s
    return state


@dataclass
class DetEqReport:
    """Asymptotic traces and the per-user rates they induce."""

    gamma1: float
    gamma2: float
    gamma3: float
    rates_asym: np.ndarray
    sum_se_asym: float


def gammas_and_rates(state: DetEqState, betas: np.ndarray, adc: AdcProfile,
                     rbar: QuantNoiseCov, p_u: float) -> DetEqReport:
    """Assemble Gamma1/Gamma2/Gamma3 and the asymptotic per-user rates.

    Requires a completed state whose S' was formed along
    Theta = Lam Lam^H; Gamma2 and Gamma3 share that single S'.
    """
    if not state.completed:
        raise ValueError("state is missing the derivative stage")
    betas = np.asarray(betas, dtype=float)
    t = adc.alphas ** 2
    g1 = state.gamma1
    g2 = float(np.sum(t * state.sprime_diag))
    g3 = float(np.sum(rbar.diag_entries * state.sprime_diag))

    terms = betas * g2 / (1.0 + betas * g1) ** 2
    interference = p_u * (np.sum(terms) - terms)  # leave-one-out sum
    sinr = p_u * betas * g1 ** 2 / (interference + g2 + g3)
    r = np.log2(1.0 + sinr)
    return DetEqReport(gamma1=g1, gamma2=g2, gamma3=g3,
                       rates_asym=r, sum_se_asym=float(r.sum()))


def asymptotic_report(profile: LargeScaleProfile, adc: AdcProfile, p_u: float,
                      tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
                      ) -> DetEqReport:
    """End-to-end closed form for a drop, an ADC profile, and a power level."""
    theta = 1.0 / p_u
    z = noise_shaping_diag(adc, profile, p_u)
    state, _ = solve_gamma1(profile.betas, adc, z, theta, tol=tol, max_iter=max_iter)
    solve_sprime(state)
    rbar = avg_quant_noise_cov(adc, profile, p_u)
    return gammas_and_rates(state, profile.betas, adc, rbar, p_u)
