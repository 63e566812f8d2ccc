"""Building qubit-qudit states from triangular factors.

A 2 x d state can be assembled as rho = X^dag X from the block matrix
X = [[x1, s x1], [0, x2]].  This demo builds a few states that way, looks
at their (a, b, c) blocks, and shows what the partial transpose does.
"""

import numpy as np

from spptkit import (
    SpptFactors,
    assemble_state,
    blocks,
    partial_transpose,
    sppt_residual,
)

np.set_printoptions(precision=4, suppress=True, linewidth=120)

# --- a product-like example: x1 = identity, s = diagonal --------------------
d = 3
factors = SpptFactors(
    x1=np.eye(d, dtype=complex),
    s=np.diag([0.5, -0.25, 1.0j]),
    x2=0.3 * np.eye(d, dtype=complex),
)
state = assemble_state(factors)
print("assembled state (2x3, unnormalized), trace", round(state.trace(), 6))
a, b, c = blocks(state)
print("block a = x1^dag x1:\n", a.real)
print("block b = x1^dag s x1:\n", b)
print()

# s is diagonal, hence normal, so this state is strong-PPT:
print("strong-PPT residual ||x1^dag (s^dag s - s s^dag) x1|| =",
      sppt_residual(factors.x1, factors.s))
print()

# --- the partial transpose swaps b and b^dag --------------------------------
pt = partial_transpose(state)
a2, b2, c2 = blocks(pt)
print("partial transpose flips the off-diagonal block:",
      np.allclose(b2, b.conj().T))
print("eigenvalues of rho:   ", np.round(np.linalg.eigvalsh(state.rho), 4))
print("eigenvalues of rho^PT:", np.round(np.linalg.eigvalsh(pt.rho), 4))
print("both nonnegative: this state is PPT (as every strong-PPT state is).")
print()

# --- a non-normal s breaks the strong-PPT condition -------------------------
shift = np.zeros((d, d), dtype=complex)
shift[0, 1] = 1.0
bad = SpptFactors(x1=np.eye(d, dtype=complex), s=shift,
                  x2=np.zeros((d, d), dtype=complex))
print("with s = upper shift the residual is",
      round(sppt_residual(bad.x1, bad.s), 6), "(condition fails),")
print("yet rho = X^dag X is of course still PSD:",
      np.linalg.eigvalsh(assemble_state(bad).rho).min() >= -1e-12)
