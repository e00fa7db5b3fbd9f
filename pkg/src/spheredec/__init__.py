"""Sphere decoders with lazy projection updates, plus the tooling to verify
them and measure their operation counts."""
from .counting import OpCounter, charge, cost_table, count_ops
from .decoder import (
    DecodeResult, DecoderConfig, SphereDecoder, Trace, decode, round_clamped,
    round_nearest, sign_step, trace_decode,
)
from .experiments import ExperimentSpec, GainReport, gain, run_experiment
from .linalg import (
    LowerTriangularPair, RankError, SingularMatrixError, invert_lower_triangular,
    lower_triangularize,
)
from .oracle import OracleResult, oracle_finite, oracle_lattice
from .reduction import ReducedBasis, lll_reduce
from .sampling import (
    ChannelInstance, pam_channel_instance, random_gaussian_matrix,
    uniform_voronoi_sample,
)

__version__ = "0.1.0"
