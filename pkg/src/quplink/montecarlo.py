"""Seeded, reproducible Monte Carlo estimation of the exact uplink SE.

Randomness is split into three independent domains derived from seeds
through numpy's SeedSequence spawn keys: user drops (geometry and
shadowing), ADC bit assignment (a per-drop hardware property), and
small-scale fading trials.  Under a fixed drop the drop seed alone pins
the geometry and the bit assignment, so sweeps over power or antennas
reuse identical hardware; the run seed only drives fading.  Every trial
owns a private substream addressed by its index, which makes estimates
bitwise reproducible for any worker count.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .aqnm import INFINITE, AdcProfile, quant_noise_cov, rho_for_bits
from .channel import CellConfig, LargeScaleProfile, draw_channel, generate_large_scale
from .detequiv import DetEqReport
from .receiver import ReceiverKind, build_receiver, rates, sinr_breakdown

_DROP_DOMAIN = 0
_BITS_DOMAIN = 1
_TRIAL_DOMAIN = 2

#: Trials per work unit; fixed so schedules never influence results.
BATCH_TRIALS = 64


class PowerMode(enum.Enum):
    FIXED = "fixed"
    SCALED_BY_M = "scaled_by_m"


@dataclass
class UniformBits:
    """Every antenna runs the same resolution (INFINITE allowed)."""

    bits: object

    def __post_init__(self):
        rho_for_bits(self.bits)  # validates


@dataclass
class RandomBits:
    """Per-antenna resolution drawn uniformly from {min_bits..max_bits}."""

    min_bits: int
    max_bits: int

    def __post_init__(self):
        if not (isinstance(self.min_bits, int) and isinstance(self.max_bits, int)):
            raise ValueError("random bit bounds must be integers")
        if not 1 <= self.min_bits <= self.max_bits:
            raise ValueError("require 1 <= min_bits <= max_bits")


@dataclass
class ExplicitBits:
    """Caller-specified resolution list, one entry per antenna."""

    bits: tuple

    def __post_init__(self):
        self.bits = tuple(self.bits)
        for b in self.bits:
            rho_for_bits(b)


@dataclass
class FixedDrop:
    """One drop pinned by its own seed, shared across trials and sweeps."""

    seed: int


@dataclass
class AverageOverDrops:
    """Average over `count` drops derived from the run seed."""

    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("drop count must be at least 1")


@dataclass
class SystemConfig:
    """Dimensions, power, ADC policy, geometry, and drop handling of a run."""

    M: int
    K: int
    adc_policy: object
    drop_mode: object
    p_u: float | None = None
    power_mode: PowerMode = PowerMode.FIXED
    e_u: float | None = None
    cell: CellConfig = field(default_factory=CellConfig)

    def __post_init__(self):
        if not self.M >= self.K >= 1:
            raise ValueError("require M >= K >= 1")
        if self.power_mode is PowerMode.FIXED:
            if self.p_u is None or self.p_u <= 0.0:
                raise ValueError("fixed power mode needs p_u > 0")
        else:
            if self.e_u is None or self.e_u <= 0.0:
                raise ValueError("scaled power mode needs e_u > 0")
        if isinstance(self.adc_policy, ExplicitBits) and len(self.adc_policy.bits) != self.M:
            raise ValueError("explicit bit list length must equal M")

    def effective_power(self) -> float:
        """Per-user linear transmit power after applying the power mode."""
        if self.power_mode is PowerMode.FIXED:
            return float(self.p_u)
        return float(self.e_u) / self.M

    @property
    def pu_db(self) -> float:
        return 10.0 * np.log10(self.effective_power())


@dataclass
class McEstimate:
    """Monte Carlo SE estimate with per-trial standard errors."""

    per_user_rates: np.ndarray
    per_user_stderr: np.ndarray
    sum_se: float
    stderr: float
    trials: int
    seed: int


def _stream(entropy: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=entropy, spawn_key=key))


def _resolve_adc(policy, M: int, rng: np.random.Generator) -> AdcProfile:
    if isinstance(policy, UniformBits):
        return AdcProfile.uniform(policy.bits, M)
    if isinstance(policy, RandomBits):
        draws = rng.integers(policy.min_bits, policy.max_bits + 1, size=M)
        return AdcProfile.from_bits(int(b) for b in draws)
    if isinstance(policy, ExplicitBits):
        return AdcProfile.from_bits(policy.bits)
    raise TypeError(f"unknown ADC policy {policy!r}")


def resolve_drops(config: SystemConfig, seed: int) -> list[tuple[LargeScaleProfile, AdcProfile]]:
    """Materialize the drops (geometry plus bit assignment) of a run.

    A FixedDrop derives both from its own seed, so the run seed cannot
    perturb the scenario; averaging mode derives drop d from the run
    seed and the drop index.
    """
    if isinstance(config.drop_mode, FixedDrop):
        ds = config.drop_mode.seed
        profile = generate_large_scale(config.cell, config.K, _stream(ds, _DROP_DOMAIN))
        adc = _resolve_adc(config.adc_policy, config.M, _stream(ds, _BITS_DOMAIN))
        return [(profile, adc)]
    out = []
    for d in range(config.drop_mode.count):
        profile = generate_large_scale(config.cell, config.K, _stream(seed, _DROP_DOMAIN, d))
        adc = _resolve_adc(config.adc_policy, config.M, _stream(seed, _BITS_DOMAIN, d))
        out.append((profile, adc))
    return out


def run_monte_carlo(config: SystemConfig, receiver_kind: ReceiverKind, trials: int,
                    seed: int, workers: int = 1) -> McEstimate:
    """Estimate per-user and sum SE over seeded fading trials.

    Parameters
    ----------
    config : SystemConfig
        Scenario; under AverageOverDrops the estimate pools
        `trials` fading trials from each drop.
    receiver_kind : ReceiverKind
        Receiver evaluated in every trial.
    trials : int
        Small-scale trials per drop.
    seed : int
        Run seed; every trial uses the substream (seed, drop, trial).
    workers : int
        Thread count.  Results are bitwise identical for any value
        because trials are partitioned into fixed batches regardless of
        scheduling.

    Returns
    -------
    McEstimate
        Means over all pooled trials; stderr is the standard error of
        the per-trial sum SE.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    drops = resolve_drops(config, seed)
    p_u = config.effective_power()
    n_total = trials * len(drops)
    all_rates = np.empty((n_total, config.K))

    def run_batch(job):
        drop_idx, start, stop = job
        profile, adc = drops[drop_idx]
        for t in range(start, stop):
            rng = _stream(seed, _TRIAL_DOMAIN, drop_idx, t)
            try:
                chan = draw_channel(profile, config.M, rng)
                rnq = quant_noise_cov(chan, adc, p_u)
                ctx = build_receiver(receiver_kind, chan, adc, profile, p_u)
                report = rates(sinr_breakdown(ctx, chan, adc, rnq, p_u))
            except Exception as e:
                raise RuntimeError(f"trial {t} of drop {drop_idx} failed: {e}") from e
            all_rates[drop_idx * trials + t] = report.rates

    jobs = [(d, start, min(start + BATCH_TRIALS, trials))
            for d in range(len(drops)) for start in range(0, trials, BATCH_TRIALS)]
    if workers <= 1:
        for job in jobs:
            run_batch(job)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_batch, jobs))

    per_trial_sum = all_rates.sum(axis=1)
    ddof = 1 if n_total > 1 else 0
    return McEstimate(
        per_user_rates=all_rates.mean(axis=0),
        per_user_stderr=all_rates.std(axis=0, ddof=ddof) / np.sqrt(n_total),
        sum_se=float(per_trial_sum.mean()),
        stderr=float(per_trial_sum.std(ddof=ddof) / np.sqrt(n_total)),
        trials=n_total,
        seed=seed,
    )


@dataclass
class ComparisonRecord:
    """Relative gaps between a Monte Carlo estimate and the closed form."""

    per_user_rel_err: np.ndarray
    sum_rel_err: float
    tolerance: float
    within_tolerance: bool


def compare_reports(mc: McEstimate, deteq: DetEqReport, tolerance: float = 0.05) -> ComparisonRecord:
    """Relative error of the closed form against the MC reference.

    The pass flag allows the stated tolerance plus three standard errors
    of the MC sum, so a tight closed form is not failed for MC noise.
    """
    if mc.per_user_rates.shape != deteq.rates_asym.shape:
        raise ValueError("estimates cover different user counts")
    sum_rel = abs(mc.sum_se - deteq.sum_se_asym) / abs(mc.sum_se)
    per_user = np.abs(mc.per_user_rates - deteq.rates_asym) / np.abs(mc.per_user_rates)
    within = sum_rel <= tolerance + 3.0 * mc.stderr / abs(mc.sum_se)
    return ComparisonRecord(per_user_rel_err=per_user, sum_rel_err=float(sum_rel),
                            tolerance=tolerance, within_tolerance=bool(within))
