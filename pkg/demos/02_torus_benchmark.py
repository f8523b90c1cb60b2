"""Which 100 of 400 torus points should be labeled?

The response sin(u) + sin(u)^2 + cos(v)^2 lives on a torus in R^3.  We
compare four ways of choosing the points to label, refitting after every
label and measuring the error over the whole pool:

* odoem: greedy D-optimal picks under the manifold-regularized information
  matrix, fitted with Laplacian-regularized least squares
* classical-d: the same greedy rule without the graph term, ridge fit
* random, and a farthest-point (maximin) space-filling design

Runtime is about a minute on one core.
"""

import numpy as np

from manifold_doe import ExperimentConfig, StrategySpec, compare, generate

data = generate("torus", n=400, noise_var=0.0)
configs = [
    ExperimentConfig(StrategySpec("odoem"), budget=100),
    ExperimentConfig(StrategySpec("classical-d"), budget=100),
    ExperimentConfig(StrategySpec("random", seed=1), budget=100, seed=1),
    ExperimentConfig(StrategySpec("uniform-maximin"), budget=100),
]
table = compare(configs, data)

print("strategy           MSE@10   MSE@50   MSE@100   area")
for curve in table.curves:
    mse = np.asarray(curve.mse)
    print(f"{curve.label:18s} {mse[9]:7.4f}  {mse[49]:7.4f}  {mse[99]:7.4f}  {curve.area:7.2f}")

# the schedule for lambda_i shrinks as labels accumulate
odoem = table.curves[0]
print("\nlambda_i used at k = 1, 10, 50, 100:", [round(odoem.lambda_i[k - 1], 3) for k in (1, 10, 50, 100)])

# the first few ODOEM picks, as (u, v) angles on the torus
print("first ODOEM picks (u, v):")
print(np.round(data.params[odoem.index[:6]], 2))
