"""Operation counting for the sphere decoders.

The decoding kernel does not add up flops itself.  It tallies how many times
each counted micro-step of the search executes (one slot per step in
``STEPS``); :func:`count_ops` then prices the tally with :func:`cost_table`.
Every classification decision therefore lives in the table below and can be
changed without touching the kernel.

Classification rules:

* arithmetic and comparisons on reals (including ``round``/``roundc`` and the
  sign of a real displacement) are flops;
* arithmetic and comparisons on integers (coefficients, zig-zag steps, the
  ``d`` bookkeeping) are intops;
* tests and updates of the layer index ``i`` and plain assignments are free,
  like loop counters.
"""
from dataclasses import dataclass
import math

FLOP = "flop"
INTOP = "intop"

# (name, kind, amount per execution, the line of the search it prices)
_TABLE = (
    ("e_init_term", FLOP, 2, "E_{n,j} = sum_k r_k H_{k,j}: one multiply-add per term"),
    ("e_row_update", FLOP, 2, "E_{i,j} = E_{i+1,j} - y H_{i+1,j}"),
    ("e_col_update", FLOP, 2, "E_{j-1,i} = E_{j,i} - y_j H_{j,i}"),
    ("f_col_update", FLOP, 2, "F_{j-1,i} = F_{j,i} + u_j G_{j,i}"),
    ("p_sum_term", FLOP, 2, "one term u_j G_{j,i} of the direct projection sum"),
    ("p_finish", FLOP, 2, "p_i = (r_i - sum)/G_{i,i} or (r_i - F_{i,i})/G_{i,i}"),
    ("round", FLOP, 1, "u_i = round(.)"),
    ("roundc", FLOP, None, "u_i = roundc(.), ceil(log2 L) flops"),
    ("displacement", FLOP, 2, "y = (p_i - u_i) G_{i,i} or (E_{i,i} - u_i)/H_{i,i}"),
    ("sign_real", FLOP, 1, "Delta_i = sign(y)"),
    ("lambda_square", FLOP, 1, "lambda_n = y^2"),
    ("lambda_accumulate", FLOP, 2, "lambda_i = lambda_{i+1} + y^2"),
    ("radius_compare", FLOP, 1, "while (lambda_i < C) / while (lambda_i >= C)"),
    ("u_step", INTOP, 1, "u_i = u_i + Delta_i"),
    ("zigzag_update", INTOP, 3, "Delta_i = -Delta_i - sign(Delta_i)"),
    ("range_check", INTOP, 2, "U_min <= u_i <= U_max"),
    ("d_compare", INTOP, 1, "d_j < i"),
)

STEPS = tuple(row[0] for row in _TABLE)
N_STEPS = len(STEPS)

# slot indices used by the kernel
(E_INIT_TERM, E_ROW_UPDATE, E_COL_UPDATE, F_COL_UPDATE, P_SUM_TERM, P_FINISH,
 ROUND, ROUNDC, DISPLACEMENT, SIGN_REAL, LAMBDA_SQUARE, LAMBDA_ACCUMULATE,
 RADIUS_COMPARE, U_STEP, ZIGZAG_UPDATE, RANGE_CHECK, D_COMPARE) = range(N_STEPS)


def roundc_cost(levels):
    """Flops charged for one ``roundc`` over a range of ``levels`` integers.

    1 for 2-PAM and 2 for 4-PAM, i.e. the depth of a binary search over the
    level boundaries; never less than one.
    """
    if levels < 1:
        raise ValueError("empty constellation range")
    return max(1, math.ceil(math.log2(levels)))


def cost_table(levels=2):
    """Ordered mapping ``step -> (kind, amount)`` used to price a tally.

    ``levels`` only affects the price of ``roundc``.
    """
    table = {}
    for name, kind, amount, _ in _TABLE:
        if amount is None:
            amount = roundc_cost(levels)
        table[name] = (kind, amount)
    return table


def describe_steps():
    return {name: line for name, _, _, line in _TABLE}


@dataclass
class OpCounter:
    flops: int = 0
    intops: int = 0

    def reset(self):
        self.flops = 0
        self.intops = 0

    def snapshot(self):
        return OpCounter(self.flops, self.intops)

    def __add__(self, other):
        return OpCounter(self.flops + other.flops, self.intops + other.intops)


def charge(counter, kind, amount=1):
    """Add ``amount`` operations of ``kind`` to ``counter`` and return it."""
    if amount < 1:
        raise ValueError("amount must be >= 1, got %r" % (amount,))
    if kind == FLOP:
        counter.flops += amount
    elif kind == INTOP:
        counter.intops += amount
    else:
        raise ValueError("unknown operation kind %r" % (kind,))
    return counter


def count_ops(tally, levels=2):
    """Price a per-step execution tally into an :class:`OpCounter`."""
    if len(tally) != N_STEPS:
        raise ValueError("tally has %d slots, expected %d" % (len(tally), N_STEPS))
    counter = OpCounter()
    for executions, (kind, amount) in zip(tally, cost_table(levels).values()):
        if executions:
            charge(counter, kind, int(executions) * amount)
    return counter
