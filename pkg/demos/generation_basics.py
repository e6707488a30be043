"""
Which tuples generate an algebra?
=================================

A tuple generates when the smallest op-closed subspace containing it, and
the unit, is the whole space.
"""
import numpy as np
from genbound import matrix, prime_field, split_octonion, subalgebra_closure, nmax, find_sextonion, QQ

F3 = prime_field(3)
M2 = matrix(2, F3)

# E_11 alone only reaches the diagonal
e11 = [1, 0, 0, 0]
print("closure of E_11:", subalgebra_closure(M2, [e11]).basis.dim)

# E_12 and E_21 give everything
print("closure of E_12, E_21:", subalgebra_closure(M2, [[0, 1, 0, 0], [0, 0, 1, 0]]).basis.dim)

# the largest proper subalgebra of Mat_2 is a Borel
print("n_max(Mat_2):", nmax(M2).value)

# a random pair of split octonions over F_3
rng = np.random.default_rng(1)
O = split_octonion(F3)
pair = F3.random(rng, (2, 8))
print("octonion pair spans", subalgebra_closure(O, pair).basis.dim, "dimensions")

# three elements are enough to generate a sextonion subalgebra
basis, gens = find_sextonion(0, QQ)
print("sextonion: dim", basis.dim, "from", len(gens), "generators")
