# %% [markdown]
# Regression with lost signs.  Most targets come as |y| in an interval,
# i.e. the set [-b, -a] U [a, b].  Averaging the set collapses towards 0;
# the infimum loss picks the branch the neighbours agree on.

# %%
import numpy as np

from infloss.regression import PartialRegressor
from infloss.weak import generate_phase_regression, phase_signal, rng_stream

rng = rng_stream(0, "demo", "phase")
x, y, sets = generate_phase_regression(200, rng, p_phase=0.3)
print(sum(S.lo.size == 2 for S in sets), "of", len(sets), "sets lost their sign")

# %%
# with very small lambda the weights turn sharply negative and IL overfits
model = PartialRegressor(sigma=0.05, lam=1.0 / np.sqrt(200)).fit(x[:, None], sets)
xq = np.linspace(0, 1, 400)
truth = phase_signal(xq)
for rule in ("IL", "AC"):
    pred = model.predict(xq[:, None], rule)
    print(rule, "test MSE", round(float(np.mean((pred - truth) ** 2)), 4))
