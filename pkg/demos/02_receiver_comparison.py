"""Compare the three receivers over a power sweep on one user drop.

The quantization-aware MMSE receiver whitens the (channel-averaged)
quantization noise alongside the thermal noise.  Ignoring that term
costs little when thermal noise dominates, but the penalty grows with
transmit power: the quantization noise scales with p_u, so at high
power it is the only noise left and shaping it is what pays.
"""

import numpy as np

from quplink import (
    FixedDrop,
    RandomBits,
    ReceiverKind,
    SystemConfig,
    run_monte_carlo,
)

TRIALS = 400
SEED = 1

print("M = 64 antennas, K = 8 users, per-antenna resolutions drawn from {1,2,3}")
print(f"{TRIALS} fading trials per point, one fixed drop\n")

header = f"{'p_u [dB]':>9} | {'aware MMSE':>12} | {'plain MMSE':>12} | {'matched filter':>14}"
print(header)
print("-" * len(header))

for pu_db in (0.0, 10.0, 20.0, 30.0):
    config = SystemConfig(M=64, K=8, adc_policy=RandomBits(1, 3),
                          drop_mode=FixedDrop(21), p_u=10.0 ** (pu_db / 10.0))
    se = {}
    for kind in ReceiverKind:
        est = run_monte_carlo(config, kind, TRIALS, SEED)
        se[kind] = est
    print(f"{pu_db:>9.0f} | "
          f"{se[ReceiverKind.PROPOSED_MMSE].sum_se:>12.3f} | "
          f"{se[ReceiverKind.AWGN_ONLY_MMSE].sum_se:>12.3f} | "
          f"{se[ReceiverKind.MRC].sum_se:>14.3f}")

print("""
Sum spectral efficiency in bits/s/Hz.  All three receivers see the same
fading draws (common random numbers), so the comparison is paired.
At 0 dB the plain receiver can even edge slightly ahead: the shaping
term whitens the channel-averaged quantization noise, which is a small
mismatch per realization, and at low power there is little quantization
noise to shape anyway.  The picture flips decisively by 20-30 dB, where
shaping is worth several bits/s/Hz, and the matched filter stops being
competitive as soon as interference dominates.""")
