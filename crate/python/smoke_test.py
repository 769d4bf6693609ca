#!/usr/bin/env python3
"""Smoke test for the swcp_py extension module.

Build the module first:

    cargo build --release -p swcp-py

then run:

    python3 python/smoke_test.py
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def import_swcp_py():
    """Copy the built cdylib next to a temp dir under the module name."""
    candidates = [
        REPO / "target" / "release" / "libswcp_py.so",
        REPO / "target" / "debug" / "libswcp_py.so",
        REPO / "target" / "release" / "libswcp_py.dylib",
        REPO / "target" / "debug" / "libswcp_py.dylib",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("swcp_py is not built; run `cargo build --release -p swcp-py` first")
    stage = Path(tempfile.mkdtemp(prefix="swcp_py_"))
    shutil.copy(built, stage / "swcp_py.so")
    sys.path.insert(0, str(stage))
    import swcp_py

    return swcp_py


def check(label, ok):
    print(f"{'ok' if ok else 'FAIL'}  {label}")
    if not ok:
        sys.exit(1)


def main():
    swcp = import_swcp_py()

    # Closed forms.
    v = swcp.comb_brw_critical(1.0)
    check("comb critical at r=1 equals sqrt(5)-1", abs(v - (math.sqrt(5) - 1)) < 1e-12)
    check(
        "quadratic root agrees with the closed form",
        abs(swcp.limiting_quadratic_root(2.0) - swcp.comb_brw_critical(2.0)) < 1e-12,
    )
    ev = swcp.level_matrix_eigenvalue(0.9, 0.4)
    check("eigenvalue > 1 iff alpha + beta^2 > 1", ev > 1.0)
    bound = swcp.lambda2_brw_lower_bound(1.0, 10**6)
    check("K_M bound approaches the comb value", abs(bound - v) < 1e-3)

    # Chain analysis.
    an = swcp.chain_analysis(1.05, 2.0, 27)
    check("chain F below 1 in the subcritical window", 0 < an["f"] < 1)
    check("green = 1/(1-F)", abs(an["green"] - 1 / (1 - an["f"])) < 1e-12)
    row = swcp.chain_kernel(0, 1 / 3, 27)
    check("chain kernel row sums to 1", abs(sum(p for _, p in row) - 1) < 1e-12)

    # Addresses.
    check(
        "short neighbors of the origin",
        swcp.big_world_short_neighbors("+(0)", 1, 1) == ["+(-1)", "+(1)"],
    )
    check("long neighbor of +(2) hangs a tooth", swcp.big_world_long_neighbor("+(2)") == "+(2;0)")
    check("long neighbor flips sign at the origin", swcp.big_world_long_neighbor("+(0)") == "-(0)")
    check("comb tooth has degree 1", swcp.comb_neighbors("+(3;0)", 1, 1) == ["+(3)"])
    km = swcp.km_neighbors([0], 5)
    check("K_M root attaches to state 1", km == [([0, 0], 1)])

    # Graphs and dynamics.
    g = swcp.SmallWorldGraph(16, 1, 1, 42)
    short, partner = g.neighbors(0)
    check("small-world neighborhoods", short == [15, 1] and g.matched_partner(partner) == 0)
    check("ball of radius 0 is always treelike", g.is_ball_treelike(0, 0))

    params = swcp.ModelParams(0.9, 0.4, 1, 1)
    kind, time = swcp.run_tau(params, 50, seed=7)
    check("run_tau returns a stop outcome", kind in {"extinct", "censored"} and time >= 1)
    kind, time = swcp.run_sigma(params, 50, seed=7)
    check("run_sigma returns a stop outcome", kind in {"extinct", "returned", "censored"})

    dead = swcp.ModelParams(0.0, 0.0, 1, 1, unconstrained=True)
    est = swcp.estimate_survival_probability(dead, 10, 100, seed=1)
    check("zero rates never survive", est["value"] == 0.0)

    grow = swcp.estimate_growth_rate(
        swcp.ModelParams.from_lambda_r(1.2, 2.0, 1, 1), "branching", 1, 8, 4000, seed=3
    )
    check(
        "branching slope tracks log lambda",
        abs(grow["c2_hat"] - math.log(1.2)) < 4 * grow["slope_stderr"],
    )

    print("all smoke checks passed")


if __name__ == "__main__":
    main()
