"""Why a CNOT cannot be built from single-pass qubit-ancilla steps.

A square (N -> N) unitary admits a sequential decomposition, where an
itinerant ancilla meets each qubit exactly once and no measurements are
allowed, only if it is a tensor product of single-qubit unitaries.  The
witness is the operator Schmidt rank across every contiguous cut: rank 1
everywhere means product, anything larger means entangling and hence not
sequentially implementable, no matter how large the ancilla is.
"""

import numpy as np

from seqdecomp import (
    cnot,
    haar_unitary,
    operator_schmidt_ranks,
    product_unitary,
    sequentiality_test,
)

np.set_printoptions(precision=6, suppress=True)

# The CNOT gate: control on site 1, target on site 2.
gate = cnot()
print("CNOT matrix:")
print(gate.matrix.real.astype(int))

report = sequentiality_test(gate)
print("\nimplementable sequentially?", report.implementable)
print("criterion residual per input site:", [f"{r:.3e}" for r in report.per_site_residuals])
print("operator Schmidt ranks:", operator_schmidt_ranks(gate))

# The first input site always satisfies the criterion (that is the
# statement that any 1 -> N isometry is sequentially implementable); the
# second site fails at order one, eight orders of magnitude above the
# acceptance tolerance, so the verdict is robust.

# Contrast with a product of two Haar-random single-qubit unitaries.
rng = np.random.default_rng(7)
product = product_unitary([haar_unitary(2, rng), haar_unitary(2, rng)])
product_report = sequentiality_test(product)
print("\nrandom U1 (x) U2:")
print("implementable sequentially?", product_report.implementable)
print("criterion residuals:", [f"{r:.3e}" for r in product_report.per_site_residuals])
print("operator Schmidt ranks:", operator_schmidt_ranks(product))
print("ancilla dimension needed:", product_report.ancilla_dim_if_yes)

# SWAP is even worse than CNOT: its reshuffled matrix has full rank 4.
swap = np.eye(4)[:, [0, 2, 1, 3]].astype(complex)
from seqdecomp import Isometry

print("\nSWAP operator Schmidt ranks:", operator_schmidt_ranks(Isometry(2, 2, swap)))
