"""Census of reflexive transitive digraphs: symmetry vs the reduction property.

Enumerates every reflexive transitive digraph up to the requested node count,
confirms the reduction-property verdict equals graph symmetry, and
spot-checks the amplified-representation norm envelope M n^2 on conjugated
representations.
"""

import argparse
import time

import numpy as np

from reduction_lab.gallery import (
    all_reflexive_transitive_digraphs,
    digraph_algebra,
    digraph_cb_bound_check,
)
from reduction_lab.modules import Representation, has_reduction_property
from reduction_lab.sampling import random_invertible


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nodes", type=int, default=4)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--cb-samples", type=int, default=200)
    ap.add_argument("--amplification", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'n':>3} {'graphs':>7} {'symmetric':>10} {'reduction':>10} {'agree':>6} "
          f"{'worst cb ratio':>15} {'seconds':>8}")
    for n in range(1, args.nodes + 1):
        t0 = time.perf_counter()
        graphs = all_reflexive_transitive_digraphs(n)
        sym = 0
        red = 0
        agree = 0
        worst_ratio = 0.0
        for G in graphs:
            A = digraph_algebra(G)
            verdict, _ = has_reduction_property(A)
            sym += G.symmetric
            red += verdict
            agree += verdict == G.symmetric
            R = random_invertible(n, rng, max_cond=20)
            R_inv = np.linalg.inv(R)
            theta = Representation(
                source=A, target_dim=n, images=[R @ b @ R_inv for b in A.basis]
            )
            observed, bound = digraph_cb_bound_check(
                G, theta, min(args.amplification, n),
                samples=args.cb_samples, seed=int(rng.integers(2**31)),
            )
            worst_ratio = max(worst_ratio, observed / bound)
        print(f"{n:3d} {len(graphs):7d} {sym:10d} {red:10d} {agree:6d} "
              f"{worst_ratio:15.4f} {time.perf_counter() - t0:8.2f}")


if __name__ == "__main__":
    main()
