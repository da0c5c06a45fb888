"""Cover pebbling numbers by exhaustive search, next to the closed forms."""

# %%
import math

from pebblecover.numbers import gamma_bruteforce, pi_bruteforce
from pebblecover.graphs import build_complete, build_hypercube, build_path, cartesian_product
from pebblecover.numbers import closed_forms, cover_ratio

graphs = [
    build_path(3), build_path(4), build_complete(4),
    build_hypercube(2), cartesian_product(build_path(2), build_path(3)),
]

# %%
for g in graphs:
    gamma = gamma_bruteforce(g)
    pi = pi_bruteforce(g)
    print(f"{g.label:24} n={g.vertex_count}  gamma={gamma.value:3}  pi={pi.value:2}  "
          f"({gamma.elapsed:.2f}s)")

# %% Cubes beyond brute-force reach come from the closed forms.
for d in range(7):
    r = cover_ratio(f"cube:{d}")
    n = 2**d
    print(d, closed_forms(f"cube:{d}").value, r.value, round(n ** (math.log2(3) - 1), 6))
