# %% [markdown]
# Three outputs a, b, c with l(a, b) = l(a, c) = 1 and l(b, c) = 2.
# Most of the mass sits on the uninformative set {a, b, c}, yet every
# set contains c, so c is the only output compatible with all the data.
# The infimum loss finds it; averaging and worst-case losses prefer a.

# %%
import numpy as np

from infloss import pointwise as pw

loss = np.array([[0, 1, 1], [1, 0, 2], [1, 2, 0]], dtype=float)
tau = {(0, 1, 2): 5 / 8, (2,): 1 / 8, (0, 2): 1 / 8, (1, 2): 1 / 8}
names = "abc"

# %%
for rule in pw.RULES:
    r = pw.risks(tau, loss, rule)
    print(rule, {k: round(float(v), 4) for k, v in zip(names, r)}, "->", names[pw.predict(tau, loss, rule)])

# %%
print("disambiguation:", names[pw.disambiguate(tau, loss).output])
print("eta =", pw.ambiguity_eta(tau, 3), " nu =", pw.discrepancy_nu(loss))
print("comparison constant", pw.comparison_constant(loss, tau),
      "tightest", round(pw.tightest_constant(loss, tau), 4))
