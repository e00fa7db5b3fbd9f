# %% [markdown]
# # Uniform points in a Voronoi region
#
# A point uniform in the fundamental parallelepiped is folded back onto the
# Voronoi region by subtracting its closest lattice point.

# %%
import numpy as np

from spheredec import DecoderConfig, SphereDecoder, lll_reduce, lower_triangularize
from spheredec.sampling import VoronoiSampler, rng_for

g = lll_reduce(np.random.default_rng(2).standard_normal((6, 6))).g_reduced
pair = lower_triangularize(g)
sampler = VoronoiSampler(pair)
rng = rng_for(0, 1)
pts = np.array([sampler.sample(rng) for _ in range(2000)])

# %% [markdown]
# Every sample decodes back to the origin.

# %%
dec = SphereDecoder(DecoderConfig.from_algorithm(5), pair)
print(all(not dec.decode(p).u_hat.any() for p in pts))

# %% [markdown]
# For the integer lattice the second moment per dimension is 1/12.

# %%
cubic = VoronoiSampler(lower_triangularize(np.eye(3)))
v = np.array([cubic.sample(rng) for _ in range(5000)])
print(np.mean(np.sum(v ** 2, axis=1)), 3 / 12)
