#!/usr/bin/env python3
"""Entanglement production for k in {1, 2, 3, 6} at three coupling strengths.

Writes one entropy time series per (k, eps) under out/entropy/; the k = 6,
eps = 1e-2 series saturates at the statistical bound ln(N) - 1/2.
"""

from pathlib import Path

from ktops.cli import RunConfig, run

OUT = Path("out/entropy")

for eps in (1e-2, 1e-3, 1e-4):
    for k in (1.0, 2.0, 3.0, 6.0):
        cfg = RunConfig(
            kind="evolve", j=80, k=k, eps=eps, steps=1000,
            out=str(OUT / f"eps{eps:g}_k{k:g}"),
        )
        manifest = run(cfg)
        print(f"k={k:g} eps={eps:g}: {sorted(manifest.files)} "
              f"({manifest.duration_seconds:.1f}s)")
