# %% [markdown]
# Ranking three items from partial orders.  Nine times out of ten we only
# learn that item 0 beats item 2; the rest of the time we see the full
# order 0 > 2 > 1.  Only that order is compatible with everything.

# %%
import numpy as np

from infloss.kendall import PartialOrder, ranks_from_ordering
from infloss.ranking import alternate_minimization, ac_predict_ranking, exact_risks_ranking
from infloss.fas import all_permutations

alpha = [0.9, 0.1]
sets = [PartialOrder.from_pairs(3, [(0, 2)]), PartialOrder.total(ranks_from_ordering([0, 2, 1]))]

# %%
perms, _ = all_permutations(3)
for rule in ("IL", "AC", "SP"):
    R = exact_risks_ranking(alpha, sets, rule)
    print(rule, [f"{p.tolist()}:{r:.2f}" for p, r in zip(perms, R)])

# %%
res = alternate_minimization(alpha, sets, "IL")
print("alternating IL:", res.z, "iterations", res.iterations, "trace", res.trace)
print("sampled-center AC:", ac_predict_ranking(alpha, sets, rng=np.random.default_rng(0)))

sp = alternate_minimization(alpha, sets, "SP")
print("saddle search:", sp.z, "stalled" if sp.stalled else "converged")
