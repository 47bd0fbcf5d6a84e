"""fockforge: exact verification toolkit for Fock-space algebra.

Heisenberg/Virasoro/W-algebra structures with equivariant-parameter
coefficients, the reflection R-matrix and its Yang-Baxter harness,
integral lattices, level-1 affine characters, and the ADHM quiver model.
All arithmetic is exact over Q.
"""

__version__ = "0.1.0"
