"""Random instances: Gaussian generator matrices, Voronoi-uniform inputs and
L-PAM transmissions over an AWGN channel.

Randomness comes from numpy's PCG64 generator seeded through
``SeedSequence(seed, spawn_key=...)``.  Each (experiment, dimension, matrix,
vector) tuple gets its own stream, so results never depend on the order or
the process in which trials run.
"""
from dataclasses import dataclass

import numpy as np

from .decoder import DecoderConfig, SphereDecoder

# spawn-key tags keep streams of different purposes apart
MATRIX_STREAM = 1
VORONOI_STREAM = 2
CHANNEL_STREAM = 3


def rng_for(seed, *key):
    """Independent generator for the integer tuple ``key`` under ``seed``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def random_gaussian_matrix(n, seed, *key):
    """n x n matrix of i.i.d. N(0, 1) entries."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return rng_for(seed, MATRIX_STREAM, n, *key).standard_normal((n, n))


class VoronoiSampler:
    """Uniform samples from the Voronoi region of the origin.

    A point uniform in the fundamental parallelepiped ``w @ g`` (w uniform in
    [0, 1)^n) is folded back by subtracting its closest lattice point, found
    with the old H-based lattice decoder.  Folding preserves uniformity
    because the parallelepiped and the Voronoi region both tile space under
    lattice translations.
    """

    def __init__(self, pair):
        self.pair = pair
        self._decoder = SphereDecoder(DecoderConfig.from_algorithm(3), pair)

    def sample(self, rng):
        w = rng.random(self.pair.n)
        x = w @ self.pair.g
        c = self._decoder.decode(x).u_hat
        return x - c @ self.pair.g


def uniform_voronoi_sample(pair, seed, *key):
    return VoronoiSampler(pair).sample(rng_for(seed, VORONOI_STREAM, *key))


def pam_energies(levels):
    """``(E_s, E_b)`` of the centred L-PAM set {-(L-1)/2, ..., (L-1)/2}."""
    if levels < 2:
        raise ValueError("L-PAM needs L >= 2")
    es = (levels ** 2 - 1) / 12.0
    return es, es / np.log2(levels)


def noise_variance(levels, snr_db):
    """Per-dimension noise variance N0/2 for SNR = Eb/N0 in dB."""
    _, eb = pam_energies(levels)
    n0 = eb / 10.0 ** (snr_db / 10.0)
    return n0 / 2.0


@dataclass(frozen=True)
class ChannelInstance:
    """``r = u_true @ g + noise`` with u_true in {0, ..., L-1}^n.

    The centred transmitted symbols are ``u_true - (L-1)/2``; the offset is
    folded into ``r`` so it can be decoded over the integer range [0, L-1].
    """

    g: np.ndarray
    u_true: np.ndarray
    r: np.ndarray
    levels: int
    snr_db: float


def pam_transmit(g, levels, snr_db, rng):
    """One L-PAM transmission through the channel matrix ``g`` (rows = inputs)."""
    g = np.asarray(g, dtype=float)
    n, m = g.shape
    u_true = rng.integers(0, levels, size=n)
    symbols = u_true - (levels - 1) / 2.0
    noise = rng.standard_normal(m) * np.sqrt(noise_variance(levels, snr_db))
    received = symbols @ g + noise
    # shift into decoder coordinates: r = u_true @ g + noise
    r = received + (levels - 1) / 2.0 * g.sum(axis=0)
    return u_true, r


def pam_channel_instance(n, levels, snr_db, seed, *key):
    if not np.isfinite(snr_db):
        raise ValueError("snr_db must be finite")
    g = random_gaussian_matrix(n, seed, *key)
    u_true, r = pam_transmit(g, levels, snr_db, rng_for(seed, CHANNEL_STREAM, n, *key))
    return ChannelInstance(g=g, u_true=u_true, r=r, levels=levels, snr_db=float(snr_db))
