#!/usr/bin/env python3
"""Classical phase portraits of the single top for the four kick strengths."""

from ktops.cli import RunConfig, run

for k in (1.0, 2.0, 3.0, 6.0):
    cfg = RunConfig(kind="portrait", k=k, out=f"out/portrait/k{k:g}")
    manifest = run(cfg)
    print(f"k={k:g}: portrait_points.tsv "
          f"({manifest.files['portrait_points.tsv']} samples)")
