#!/usr/bin/env python3
"""Reduced Husimi fields at saturation for the four dynamical regimes.

The k = 2 separatrix case concentrates on the unstable period-4 orbit; at
k = 6 the field spreads over nearly the whole sphere.
"""

from ktops.cli import RunConfig, run

for k, eps, snaps in (
    (1.0, 1e-2, (0, 1000)),
    (2.0, 1e-2, (0, 1000)),
    (3.0, 1e-2, (0, 1000)),
    (6.0, 1e-2, (0, 1000)),
    (1.0, 1e-3, (384,)),
    (2.0, 1e-3, (384,)),
):
    cfg = RunConfig(
        kind="husimi", j=80, k=k, eps=eps, steps=1000, snapshots=snaps,
        out=f"out/husimi/eps{eps:g}_k{k:g}",
    )
    manifest = run(cfg)
    print(f"k={k:g} eps={eps:g}: {sorted(manifest.files)}")
