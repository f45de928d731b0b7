"""
Monte Carlo against the exact law
=================================

Time-weighted occupancy from a long trajectory, compared with the exact
stationary distribution by total variation distance.
"""

from itazrp.gillespie import SimConfig, run
from itazrp.markov import kernel_solve_numeric
from itazrp.states import Sector, format_config

sector = Sector(3, (1, 1))
w = (1, 2)
exact = kernel_solve_numeric(sector, w)

for events in (10_000, 100_000, 1_000_000):
    emp = run(SimConfig(sector, w, seed=42, events=events + 10_000, burn_in=10_000))
    print(f"{events:>9} events  tv = {emp.tv_distance(exact):.4f}")

fr = emp.fractions()
for c, p in exact.items():
    print(f"{format_config(c):>8}  exact {float(p):.4f}  simulated {fr.get(c, 0):.4f}")
