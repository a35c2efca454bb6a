#!/usr/bin/env python3
"""Effective phase-space occupancy dN_eff over time.

Single-top pure states cap near 1/2 for strong chaos; a strongly coupled
chaotic pair pushes the subsystem occupancy close to 1.
"""

from ktops.cli import RunConfig, run

for k in (1.0, 2.0, 3.0, 6.0):
    cfg = RunConfig(kind="deltaneff", j=80, k=k, steps=1000,
                    out=f"out/occupancy/single_k{k:g}")
    run(cfg)
    print(f"single top k={k:g} done")

for eps in (1e-2, 1e-3, 1e-4):
    for k in (1.0, 2.0, 3.0, 6.0):
        cfg = RunConfig(kind="evolve", j=80, k=k, eps=eps, steps=1000,
                        out=f"out/occupancy/coupled_eps{eps:g}_k{k:g}")
        run(cfg)
        print(f"coupled k={k:g} eps={eps:g} done (dN_eff column of evolve_entropy.tsv)")
