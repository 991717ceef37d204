#!/usr/bin/env python3
"""Demo script for latgame.

This script shows how to use the engine programmatically: the update rule,
a single run, the growth map Φ, bootstrap percolation and the mean-field model.
"""
import argparse
import math
import sys

from latgame.core.bootstrap import bootstrap_limit
from latgame.core.lattice_rules import classify, is_absorbing, random_field
from latgame.core.meanfield import classify_regime, exact_trajectory, long_time_limit
from latgame.core.reductions import corner_fill_certificate, hypercubic_view, phi_closure, sparse_reduce
from latgame.models.lattice import GameParams, LatticeGeometry
from latgame.services.dynamics_service import simulate_active_set
from latgame.services.richardson_service import check_richardson_domination


def demo_dynamics(p: float = 0.2, seed: int = 7):
    """Run the best-response dynamics on a 64x64 torus."""
    print("\n=== Best-Response Dynamics ===\n")

    geometry = LatticeGeometry.cubic(2, 64)
    params = GameParams(a1=1.01, a2=1.0)
    print(f"Strategy classes: {[c.value for c in classify(params)]}")

    field = random_field(geometry, p, seed)
    report = simulate_active_set(field, params, t_max=100.0, seed=seed, record_every=10.0)
    print(f"Initial density of strategy 1: {field.density:.4f}")
    for sample in report.series:
        print(f"  t={sample.t:7.2f}  density1={sample.density1:.4f}  active={sample.active}")
    print(f"Absorbed: {report.absorbed} (time {report.absorption_time}), flips: {report.flips}")
    print(f"Final state absorbing: {is_absorbing(report.final, params)}")
    return field, params


def demo_reductions(field, params):
    """Sparse reduction, Φ closure and the hypercubic view."""
    print("\n=== Reductions ===\n")

    sparse = sparse_reduce(field)
    closure = phi_closure(sparse, params)
    view = hypercubic_view(closure)
    print(f"Sparse density: {sparse.density:.4f}, closure density: {closure.density:.4f}")
    print(f"Occupied hypercubes in the closure: {view.count} of {view.geometry.n_sites}")

    start = hypercubic_view(sparse)
    print(f"Bootstrap (m = 2) limit from the sparse view: {bootstrap_limit(start, 2).count} occupied")

    for d in (1, 2, 3):
        certificate = corner_fill_certificate(d, params)
        print(f"Corner fill d={d}: passed={certificate.passed}, exact={certificate.exact}")


def demo_richardson(seed: int = 3):
    """Richardson domination on a ring."""
    print("\n=== Richardson Domination ===\n")

    geometry = LatticeGeometry.cubic(1, 200)
    params = GameParams(a1=2.0, a2=1.0)
    field = random_field(geometry, 0.1, seed)
    report = check_richardson_domination(field, params, t_max=2000.0, seed=seed)
    print(f"Violations: {report.violations}, strategy 1 fixated: {report.strategy1_fixated}")


def demo_meanfield():
    """Mean-field regimes and trajectories."""
    print("\n=== Mean Field ===\n")

    for a1, a2 in [(1.0, -1.0), (-1.0, 1.0), (-1.0, -3.0), (1.01, 1.0)]:
        params = GameParams(a1=a1, a2=a2)
        regime = classify_regime(params)
        print(f"a=({a1}, {a2}): {regime.kind.value}, u*={regime.threshold}")
        for u0 in (0.15, 0.6):
            print(
                f"  u0={u0}: u1(ln 2)={exact_trajectory(u0, params, math.log(2)):.4f}, "
                f"limit={long_time_limit(u0, params):.4f}"
            )


def parse_args():
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(description="latgame Demo")

    parser.add_argument(
        "--dynamics", action="store_true", help="Run the dynamics and reductions demo"
    )
    parser.add_argument(
        "--richardson", action="store_true", help="Run the Richardson domination demo"
    )
    parser.add_argument(
        "--meanfield", action="store_true", help="Run the mean-field demo"
    )
    parser.add_argument(
        "--p", type=float, default=0.2, help="Initial density of strategy 1"
    )

    return parser.parse_args()


def main():
    """Main entry point."""
    args = parse_args()

    print("\n" + "=" * 50)
    print("latgame Demo")
    print("=" * 50)

    if args.dynamics:
        demo_reductions(*demo_dynamics(args.p))
    elif args.richardson:
        demo_richardson()
    elif args.meanfield:
        demo_meanfield()
    elif len(sys.argv) == 1:
        # Run the full demo
        demo_reductions(*demo_dynamics(args.p))
        demo_richardson()
        demo_meanfield()

    print("\n" + "=" * 50)
    print("Demo completed")
    print("=" * 50 + "\n")


if __name__ == "__main__":
    main()
