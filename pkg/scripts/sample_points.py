"""
Write synthetic point clouds as CSV for the dualalpha CLI.

Shapes:
- circle   : n evenly spaced points on the unit circle
- sphere   : n Fibonacci-spiral points on S^2
- cube     : n uniform points in [-1, 1]^m
- landmarks: greedy max-min landmarks of a uniform cube sample

Optionally writes random powers (one per line) next to the points.
"""
from __future__ import annotations
import argparse
from pathlib import Path
import numpy as np
import pandas as pd

from dualalpha.sampling import (
    circle_points,
    covering_radius,
    cutoff_for_degree,
    fibonacci_sphere,
    random_cube,
    random_powers,
    select_landmarks,
)


def make_points(args, rng) -> np.ndarray:
    if args.shape == "circle":
        return circle_points(args.n)
    if args.shape == "sphere":
        return fibonacci_sphere(args.n)
    cloud = random_cube(args.n, args.dim, rng)
    if args.shape == "landmarks":
        return cloud[select_landmarks(cloud, args.min_distance)]
    return cloud


def main(args):
    rng = np.random.default_rng(args.seed)
    pts = make_points(args, rng)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(pts).to_csv(out, header=False, index=False, float_format="%.17g")
    print(f"Wrote {len(pts)} points in R^{pts.shape[1]} → {out}")

    if args.weights_out:
        powers = random_powers(len(pts), args.max_power, rng)
        pd.Series(powers).to_csv(args.weights_out, header=False, index=False, float_format="%.17g")
        print(f"Wrote {len(powers)} powers → {args.weights_out}")

    if args.shape == "sphere":
        r = covering_radius(pts, fibonacci_sphere(20 * len(pts)))
        print(f"covering radius ≈ {r:.6f}; suggested --radius {1.5 * r:.6f}")
    else:
        print(f"alpha for average Čech degree {args.degree}: {cutoff_for_degree(pts, args.degree):.6g}")


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--shape", choices=["circle", "sphere", "cube", "landmarks"], default="circle")
    p.add_argument("--n", type=int, default=60)
    p.add_argument("--dim", type=int, default=3, help="Ambient dimension for cube/landmarks")
    p.add_argument("--min_distance", type=float, default=0.5, help="Landmark spacing")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="data/points.csv")
    p.add_argument("--weights_out", default=None, help="Also write random powers here")
    p.add_argument("--max_power", type=float, default=0.2)
    p.add_argument("--degree", type=float, default=4.0)
    main(p.parse_args())
