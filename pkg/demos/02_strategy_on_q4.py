"""Following the constructive strategy on the 4-cube."""

# %%
import numpy as np

from pebblecover.pebbling import is_good
from pebblecover.strategist import cover_strategy, random_good_configuration

# %% Two heavy antipodal corners, every one of their neighbors holding a single pebble.
c = [0] * 16
c[0b0000], c[0b1111] = 34, 30
for j in range(4):
    c[1 << j] = c[0b1111 ^ (1 << j)] = 1
c = tuple(c)
print(sum(c), is_good(4, c))

# %%
trace = cover_strategy(4, c)
print("verified:", trace.verified, "moves:", len(trace.moves))
for branch in trace.branches:
    print(branch)

# %% Random good inputs: which branches does the pipeline actually take?
rng = np.random.default_rng(7)
kinds = {}
for _ in range(200):
    t = cover_strategy(4, random_good_configuration(4, rng))
    assert t.verified and t.fallback_count == 0
    for k in t.branch_kinds():
        kinds[k] = kinds.get(k, 0) + 1
print(dict(sorted(kinds.items())))
