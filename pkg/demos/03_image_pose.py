"""Pose regression from 72 rendered views of one object.

Each image is 32 x 32 pixels of a blob pattern rotated by 0, 5, ..., 355
degrees, and the label is the angle.  With only 20 labels we want the
smallest area under the error curve.  The kNN graph over images follows the
rotation circle, which is what the manifold term exploits.
"""

import numpy as np

from manifold_doe import ExperimentConfig, StrategySpec, compare, rotating_pattern_images
from manifold_doe.graph import knn_graph

images = rotating_pattern_images(72, seed=3)
print("images:", images.vectors.shape, "angles:", images.angles[:4], "...")

# neighbours in pixel space are neighbours in angle
g = knn_graph(images.points, k=2)
gaps = np.abs(np.diff(images.angles[g.edges], axis=1)).ravel()
print("angle differences along graph edges:", sorted(set(np.minimum(gaps, 360 - gaps).tolist())))

configs = [ExperimentConfig(StrategySpec("odoem"), budget=20)]
configs += [ExperimentConfig(StrategySpec("random", seed=s), budget=20, seed=s) for s in range(5)]
table = compare(configs, images)
for kind, mean in table.mean_curves().items():
    print(f"{kind:8s} area {mean.sum():10.0f}   final MSE {mean[-1]:8.1f}")

print("ODOEM label order (degrees):", images.angles[table.curves[0].index[:10]].astype(int).tolist())
