"""
Pairing particles with dots
===========================

One level of the combinatorial construction, then a whole fiber of the
projection from multiline states to configurations.
"""

import json

from itazrp.multiline import fiber, level_trace, pair, weight_W
from itazrp.states import Sector, format_config, parse_config

# Top row: a three-species configuration on seven sites.  Bottom row: nine dots.
sigma = parse_config("e|13|2|3|e|12|11", 3)
diagram = pair(4, sigma, (0, 2, 1, 2, 0, 1, 3))
print(json.dumps(diagram.to_json(), indent=1))

# Every multiline state that projects onto one four-species configuration.
target = parse_config("3|14|e|22", 4)
for x in fiber(Sector(4, (1, 2, 1, 1)), target):
    rows = " ".join(format_config(c) for c, _ in level_trace(x))
    print(rows, " W =", weight_W(x))
