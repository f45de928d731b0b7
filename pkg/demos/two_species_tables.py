"""
Two-species steady states on small rings
========================================

Compute the unnormalized stationary weights of every configuration and print
one line per cyclic orbit.
"""

from itazrp.mpf import steady_state_mpf
from itazrp.states import Sector, format_config, orbit

# Three sites, one particle of each species.
sector = Sector(3, (1, 1))
ss = steady_state_mpf(sector)

seen = set()
for config, poly in ss.items():
    if config in seen:
        continue
    seen.update(orbit(config))
    print(f"{format_config(config):>10}  {poly}")

# Each weight is homogeneous of degree (n-1)(L-1) = 2, and at w = 1 the
# weights add up to the number of multiline states.
print("total at w=1:", sum(p.evaluate([1, 1]) for _, p in ss.items()),
      "=", sector.multiline_size)
