# %% [markdown]
# # Decoding a received vector
#
# A lattice is given by a generator matrix whose rows are basis vectors.
# The decoders work on a lower-triangular version of it, so we triangularize
# first and rotate the received vector into the same coordinates.

# %%
import numpy as np

from spheredec import DecoderConfig, SphereDecoder, lower_triangularize

rng = np.random.default_rng(0)
basis = rng.standard_normal((4, 4))
pair = lower_triangularize(basis)
r = rng.standard_normal(4) * 2
print(np.round(pair.g, 3))

# %% [markdown]
# Algorithms are numbered 1 to 8.  Odd labels search the whole lattice, even
# labels a finite range of integer coefficients.

# %%
for label in (1, 3, 5, 7):
    res = SphereDecoder(DecoderConfig.from_algorithm(label), pair).decode(pair.rotate(r))
    print(label, res.u_hat, round(res.squared_distance, 6), res.counters)

# %%
for label in (2, 4, 6, 8):
    cfg = DecoderConfig.from_algorithm(label, u_min=0, u_max=3)
    res = SphereDecoder(cfg, pair).decode(pair.rotate(r))
    print(label, res.u_hat, round(res.squared_distance, 6), res.counters)

# %% [markdown]
# All four lattice decoders walk the tree in the same order; only the cost
# of each step differs.

# %%
from spheredec import trace_decode

t3, _ = trace_decode(DecoderConfig.from_algorithm(3), pair, pair.rotate(r))
t7, _ = trace_decode(DecoderConfig.from_algorithm(7), pair, pair.rotate(r))
print(len(t3), "events, identical:", t3.events() == t7.events())
