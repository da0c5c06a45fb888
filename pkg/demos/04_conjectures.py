"""Small-graph evidence for three open questions about cover pebbling."""

# %%
import itertools

from pebblecover.graphs import build_complete, build_hypercube, build_path
from pebblecover.numbers import (
    check_product_conjecture,
    check_simple_conjecture,
    check_two_pebbling,
)

# %% Is the worst configuration always piled on a single vertex?
for g in [build_path(4), build_complete(4), build_hypercube(2)]:
    rep = check_simple_conjecture(g)
    print(g.label, rep.outcome, rep.certificate["simple_witness"])

# %% Is the cover pebbling number submultiplicative over Cartesian products?
small = [build_path(2), build_path(3), build_complete(3)]
for g, h in itertools.combinations_with_replacement(small, 2):
    if g.vertex_count * h.vertex_count <= 6:
        rep = check_product_conjecture(g, h)
        print(g.label, h.label, rep.outcome, rep.certificate)

# %% The 2-pebbling property.
for g in [build_hypercube(1), build_hypercube(2), build_complete(3)]:
    rep = check_two_pebbling(g)
    print(g.label, rep.outcome, rep.certificate["configurations"], "configurations")
