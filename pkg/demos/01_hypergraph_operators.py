"""
Hypergraph Laplacians on a toy example
======================================

Build a small hypergraph from its incidence matrix, form the three Laplacians
and check the properties that make them usable for label propagation.
"""

import numpy as np

from hypergraph_ssl import (
    Hypergraph,
    compute_degrees,
    propagation_matrix,
    quadratic_form_oracle,
    random_walk_laplacian,
    symmetric_laplacian,
    unnormalized_laplacian,
)

np.set_printoptions(precision=4, suppress=True)

# %%
# Five vertices, three hyperedges: {0,1,2}, {2,3}, {1,3,4}; the last one is heavier.
H = np.array([
    [1, 0, 0],
    [1, 0, 1],
    [1, 1, 0],
    [0, 1, 1],
    [0, 0, 1],
])
h = Hypergraph(H, edge_weights=[1.0, 1.0, 2.0])
d = compute_degrees(h)
print("vertex degrees", d.vertex_degrees)
print("edge degrees  ", d.edge_degrees)

# %%
# The un-normalized Laplacian annihilates the constant vector and is PSD.
L = unnormalized_laplacian(h, d).values
print(L)
print("L @ 1 =", L @ np.ones(5))
print("eigenvalues of L:", np.linalg.eigvalsh(L))

# %%
# Its quadratic form is a sum of squared differences inside each hyperedge.
f = np.array([1.0, 0.5, 0.0, -0.5, -1.0])
print("f^T L f      =", f @ L @ f)
print("pairwise sum =", quadratic_form_oracle(h, d, f))

# %%
# L_rw and L_sym are similar matrices, so their spectra coincide.
Lsym = symmetric_laplacian(h, d).values
Lrw = random_walk_laplacian(h, d).values
print("L_sym spectrum:", np.linalg.eigvalsh(Lsym))
print("L_rw spectrum: ", np.sort(np.linalg.eigvals(Lrw).real))

# %%
# The random-walk propagation matrix is row-stochastic.
Srw = propagation_matrix(h, d, "rw").values
print("row sums of S_rw:", Srw.sum(axis=1))
