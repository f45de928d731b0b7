"""
Exact numeric cross-check
=========================

Solve the generator's kernel at rational rates and compare with the
polynomial weights evaluated at the same rates.
"""

from fractions import Fraction

from itazrp.markov import build_generator, kernel_solve_numeric
from itazrp.multiline import steady_state_multiline
from itazrp.states import Sector, format_config

sector = Sector(3, (2, 1, 1))
w = [Fraction(1), Fraction(3, 2), Fraction(5)]

gen = build_generator(sector)
print(f"{gen.dim} configurations, {len(gen.entries)} nonzero generator entries")

exact = kernel_solve_numeric(gen, w)
combinatorial = steady_state_multiline(sector).unit_sum(w)
worst = max(abs(exact[c] - combinatorial[c]) for c in exact)
print("largest difference:", worst)

for c in list(exact)[:5]:
    print(f"{format_config(c):>12}  {exact[c]}")
