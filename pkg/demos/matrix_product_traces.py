"""
Traces of boson operators
=========================

A three-species weight assembled by hand from two-species weights and traces
of operator products on two modes.
"""

from itazrp.fock import TruncatedSpace, build_A, trace_product
from itazrp.mpf import probability_mpf, steady_state_mpf
from itazrp.polyring import Polynomial
from itazrp.states import Sector, parse_config

space = TruncatedSpace([1, 1])
sigma = parse_config("e|123", 3)

# Lower-level weights: one species-1 and one species-2 particle on two sites.
lower = steady_state_mpf(Sector(2, (1, 1)))

total = Polynomial.zero(3)
for mu, weight in lower.items():
    t = trace_product([build_A(m, s, space) for m, s in zip(mu, sigma)])
    print(mu, "trace / w3 =", t.div_var(3), "  lower weight =", weight)
    total = total + weight.embed(3) * t

print("assembled:", total.div_var(3))
print("library:  ", probability_mpf(sigma))
