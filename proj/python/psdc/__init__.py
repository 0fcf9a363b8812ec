"""Noisy-label sample selection toolkit.

Partitions labeled feature datasets into clean and noisy subsets using
pairwise cosine-affinity row sums clustered by a two-component Gaussian
mixture, alongside a Jensen-Shannon divergence baseline, noise-model
simulation, theorem oracles, and a desk-scale co-teaching loop.
"""

from ._psdc import *  # noqa: F401,F403
from ._psdc import __version__  # noqa: F401
