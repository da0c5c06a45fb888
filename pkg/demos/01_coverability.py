"""Deciding whether a pile of pebbles can cover a small graph."""

# %%
from pebblecover import build_hypercube, is_coverable
from pebblecover.pebbling import format_moves, simple_configuration, verify_cover_sequence

q2 = build_hypercube(2)

# %% [markdown]
# Eight pebbles on one corner of the square fall short: the far corner alone
# costs four, each neighbor costs two, and one must stay behind.

# %%
for k in (8, 9):
    c = simple_configuration(4, 0, k)
    res = is_coverable(q2, c)
    print(k, res.verdict.value, res.stats)

# %%
c = simple_configuration(4, 0, 9)
res = is_coverable(q2, c)
print(format_moves(res.witness))
print("final:", verify_cover_sequence(q2, c, res.witness).final)
