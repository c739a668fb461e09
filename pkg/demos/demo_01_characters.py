"""
Dirichlet characters as exact angles
====================================

Every character modulo q is pinned down by where it sends the generators
of the unit group.  We build the group, list the characters and check the
orthogonality relation.
"""

import numpy as np

from chaoszeta.arith import discrete_log, totient, unit_group_structure
from chaoszeta.characters import enumerate_characters, orthogonality_sum, value_table_rows

##############################################################################
# The unit group mod 40 splits into cyclic pieces, one or two per prime power.

st = unit_group_structure(40)
print("generators", st.generators, "orders", st.orders, "phi", totient(40))
print("7 =", " * ".join(f"{g}^{e}" for g, e in zip(st.generators, discrete_log(st, 7))), "(mod 40)")

##############################################################################
# Character values are stored as fractions of a turn.  Mod 5 the generator
# is 2, and the four characters send it to 0, 1/4, 1/2 and 3/4.

for n, angles in value_table_rows(5):
    print(n, angles)

##############################################################################
# Summing chi(n) conj(chi(m)) over all characters picks out n = m mod q.

q = 12
chars = enumerate_characters(q)
grid = np.array([[orthogonality_sum(q, n, m).real for m in range(1, q)] for n in range(1, q)])
print(grid.astype(int))
print("phi(12) =", len(chars))
