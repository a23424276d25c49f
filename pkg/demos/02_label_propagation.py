"""
Iterative and closed-form label propagation
===========================================

The three hypergraph methods on the 3-vertex chain {0,1}, {1,2} with vertex 0
labelled +1, vertex 2 labelled -1 and vertex 1 unlabelled.
"""

import numpy as np

from hypergraph_ssl import (
    Hypergraph,
    PropagationConfig,
    alpha_from_gamma,
    compute_degrees,
    predict,
    propagate_closed_form,
    propagate_iterative,
    propagation_matrix,
    solve_sym_regularized,
    solve_unnormalized,
    symmetric_laplacian,
    unnormalized_laplacian,
)

h = Hypergraph([[1, 0], [1, 1], [0, 1]])
d = compute_degrees(h)
Y = np.array([1.0, 0.0, -1.0])

# %%
# Random-walk and symmetric iterations with alpha = 0.85.
cfg = PropagationConfig(alpha=0.85)
for kind in ("rw", "sym"):
    S = propagation_matrix(h, d, kind)
    res = propagate_iterative(S, Y, cfg)
    closed = propagate_closed_form(S, Y, cfg.alpha)
    print(kind, "iterations:", res.n_iterations, "F:", res.F, "closed form:", closed)

# %%
# Un-normalized method, gamma = 1. Exact answer is (2/3, 0, -2/3).
F = solve_unnormalized(unnormalized_laplacian(h, d), Y, gamma=1.0)
print("un-normalized F:", F)

# %%
# The middle vertex sits exactly between opposite labels. Ties predict -1.
print("predictions:", predict(F))

# %%
# gamma = 1 for the symmetric regularized problem is the same as alpha = 0.5.
Fs = solve_sym_regularized(symmetric_laplacian(h, d), Y, gamma=1.0)
Fa = propagate_closed_form(propagation_matrix(h, d, "sym"), Y, alpha_from_gamma(1.0))
print("regularized:", Fs, "propagation:", Fa)
