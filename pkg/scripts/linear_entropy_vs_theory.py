#!/usr/bin/env python3
"""Measured linear entropy of slightly non-identical chaotic tops
(k1 = 6.0, k2 = 6.1) against the exact-sum and closed-form predictions."""

from ktops.cli import RunConfig, run

cfg = RunConfig(
    kind="rmt-compare", j=80, steps=1000, eps_list=(1e-4, 1e-3, 1e-2),
    out="out/rmt_compare",
)
manifest = run(cfg)
for name in sorted(manifest.files):
    print(f"{name}: {manifest.files[name]} rows")
