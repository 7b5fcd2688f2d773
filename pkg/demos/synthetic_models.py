"""
The three synthetic graph models
================================

er   : each pair is an edge independently with probability edge_prob
ar1  : a chain, ones on the first off-diagonals
hub  : node 0 attaches to a fixed fraction of the rest; the other nodes
       fill small random degree targets among themselves

Every graph becomes a positive-definite precision matrix by giving edges
fair random signs and loading the diagonal to 1 + degree.
"""

import numpy as np

from jpr import PrecisionModelSpec, gen_adjacency, make_ground_truth

# Edge counts concentrate around edge_prob * p(p-1)/2 for the er model.
for prob in (0.05, 0.2):
    counts = [gen_adjacency(PrecisionModelSpec(kind="er", p=30, seed=s,
                                               edge_prob=prob)).sum() // 2
              for s in range(50)]
    expect = prob * 30 * 29 / 2
    print(f"er p=30 prob={prob}: mean edges {np.mean(counts):.1f} (expect {expect:.1f})")

# The chain is deterministic.
A = gen_adjacency(PrecisionModelSpec(kind="ar1", p=6, seed=0))
print("\nar1 p=6 adjacency:")
print(A)

# Hub degrees: node 0 gets ceil(hub_fraction * (p-1)) partners exactly; the
# other nodes stay between min_deg and max_deg within their own subgraph.
spec = PrecisionModelSpec(kind="hub", p=16, seed=2, hub_fraction=0.25,
                          min_deg=1, max_deg=3)
A = gen_adjacency(spec)
deg = A.sum(axis=1)
print(f"\nhub p=16: hub degree {deg[0]}, others min {deg[1:].min()} max {deg[1:].max()}")

# The full ground truth carries omega (precision), sigma (its inverse), and
# q (partial correlations, diagonal -1).
truth = make_ground_truth(spec)
w = np.linalg.eigvalsh(truth.omega_star)
print(f"omega spectrum: [{w.min():.2f}, {w.max():.2f}] (positive definite)")
print(f"inverse check: max |sigma omega - I| = "
      f"{np.max(np.abs(truth.sigma_star @ truth.omega_star - np.eye(16))):.2e}")
off = truth.q_star[~np.eye(16, dtype=bool)]
print(f"partial correlations: {np.count_nonzero(off)} nonzero, "
      f"magnitudes up to {np.abs(off).max():.3f}")
