"""
Checking the operator identity
==============================

The identity behind the matrix-product formula, verified exactly for all
small indices.
"""

import time

from itazrp.fock import check_hat_relation

for n, bound in [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1)]:
    t = time.perf_counter()
    res = check_hat_relation(n, bound)
    print(f"n={n} bound={bound}: {res.tuples} index tuples, "
          f"{'ok' if res else 'FAILED'} ({time.perf_counter() - t:.1f}s)")
