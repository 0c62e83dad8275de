"""The quantum integral of a random variable against the truncated measure.

Three equivalent evaluation routes are kept deliberately separate:

* DEFINITION -- the literal double sum of pairwise minima against entries
* TRACE      -- the layered sum over super-level sets: each slab of values
                contributes its thickness times the measure of the set of
                paths reaching it (the trace identity, evaluated by sorted
                prefix sums, so the min matrix is never materialized)
* EIGEN      -- the two eigenvector quadratic forms, each computed by the
                same layering restricted to one end-site parity

Signed variables split canonically into positive and negative parts before
any route runs.  All values are exact rationals throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from math import lcm

from .decoherence import DecoherenceState, Event
from .errors import ResourceLimitError
from .paths import PathSpace

VARIABLE_MAX_STEPS = 20
DEFINITION_MAX_STEPS = 12  # the dense cutoff; the double sum is 4**n
ENTRYWISE_MAX_STEPS = 10
MIN_MATRIX_MAX = 10
PSD_CHECK_MAX_VALUES = 4096


class IntegralStrategy(Enum):
    DEFINITION = "definition"
    TRACE = "trace"
    EIGEN = "eigen"


@dataclass(frozen=True)
class RandomVariable:
    """An exact-rational-valued function on the n-path space."""

    space: PathSpace
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.space.n > VARIABLE_MAX_STEPS:
            raise ResourceLimitError(
                f"random variables are capped at n <= {VARIABLE_MAX_STEPS}"
            )
        if len(self.values) != self.space.size:
            raise ValueError("value vector length must be 2**n")

    @classmethod
    def from_values(cls, space: PathSpace, values) -> "RandomVariable":
        return cls(space, tuple(Fraction(v) for v in values))

    @classmethod
    def ones(cls, space: PathSpace) -> "RandomVariable":
        return cls(space, tuple(Fraction(j.bit_count()) for j in space.indices()))

    @classmethod
    def changes(cls, space: PathSpace) -> "RandomVariable":
        return cls(
            space, tuple(Fraction((j ^ (j >> 1)).bit_count()) for j in space.indices())
        )

    @classmethod
    def indicator(cls, event: Event) -> "RandomVariable":
        return cls(
            event.space,
            tuple(Fraction(1 if j in event else 0) for j in event.space.indices()),
        )

    @classmethod
    def constant(cls, space: PathSpace, value) -> "RandomVariable":
        return cls(space, (Fraction(value),) * space.size)

    def split(self) -> tuple["RandomVariable", "RandomVariable"]:
        """Canonical positive/negative parts: both nonnegative, product zero."""
        pos = tuple(v if v > 0 else Fraction(0) for v in self.values)
        neg = tuple(-v if v < 0 else Fraction(0) for v in self.values)
        return RandomVariable(self.space, pos), RandomVariable(self.space, neg)

    def support(self) -> tuple[int, ...]:
        return tuple(j for j, v in enumerate(self.values) if v != 0)

    def __add__(self, other: "RandomVariable") -> "RandomVariable":
        if self.space != other.space:
            raise ValueError("variables over different path spaces")
        return RandomVariable(
            self.space, tuple(a + b for a, b in zip(self.values, other.values))
        )

    def scale(self, alpha) -> "RandomVariable":
        alpha = Fraction(alpha)
        return RandomVariable(self.space, tuple(alpha * v for v in self.values))


def _scaled_ints(values: tuple[Fraction, ...]) -> tuple[list[int], int]:
    """Integer vector and common denominator so arithmetic stays in int."""
    scale = lcm(*(v.denominator for v in values)) if values else 1
    return [int(v * scale) for v in values], scale


def _definition_part(state: DecoherenceState, vals: list[int]) -> int:
    """Literal double sum of min(v_i, v_j) * sign(i, j) over the support."""
    support = [
        (j, v, (j ^ (j >> 1)).bit_count() & 3) for j, v in enumerate(vals) if v
    ]
    total = 0
    for j, vj, rj in support:
        for k, vk, rk in support:
            if (j ^ k) & 1:
                continue
            m = vj if vj < vk else vk
            total += m if rj == rk else -m
    return total


def _level_groups(members: list[tuple[int, int]]) -> list[tuple[int, list[int]]]:
    """Group (value, index) pairs by value, descending; values all positive."""
    members.sort(key=lambda t: -t[0])
    groups: list[tuple[int, list[int]]] = []
    for v, j in members:
        if groups and groups[-1][0] == v:
            groups[-1][1].append(j)
        else:
            groups.append((v, [j]))
    return groups


def _trace_part(vals: list[int]) -> int:
    """Layered evaluation: slab thickness times the squared census sums of
    the paths whose value reaches the slab."""
    members = [(v, j) for j, v in enumerate(vals) if v]
    groups = _level_groups(members)
    counts = [0, 0, 0, 0]
    total = 0
    for gi, (v, idxs) in enumerate(groups):
        for j in idxs:
            counts[(j ^ (j >> 1)).bit_count() & 3] += 1
        lower = groups[gi + 1][0] if gi + 1 < len(groups) else 0
        q = (counts[0] - counts[2]) ** 2 + (counts[1] - counts[3]) ** 2
        total += (v - lower) * q
    return total


def _eigen_part(vals: list[int]) -> int:
    """Per-parity layered quadratic forms of the two eigenvectors.

    Each parity owns its own level structure; the squared magnitude of the
    running unit-power sum is real for even endings and purely imaginary
    for odd ones, so one signed accumulator per parity suffices.
    """
    total = 0
    for parity in (0, 1):
        members = [(v, j) for j, v in enumerate(vals) if v and (j & 1) == parity]
        groups = _level_groups(members)
        low = high = 0  # counts of the two residues this parity can take
        for gi, (v, idxs) in enumerate(groups):
            for j in idxs:
                r = (j ^ (j >> 1)).bit_count() & 3
                if r == parity:
                    low += 1
                else:
                    high += 1
            lower = groups[gi + 1][0] if gi + 1 < len(groups) else 0
            total += (v - lower) * (low - high) ** 2
    return total


def integral(
    state: DecoherenceState,
    variable: RandomVariable,
    strategy: IntegralStrategy = IntegralStrategy.TRACE,
) -> Fraction:
    """The quantum integral of the variable, by the requested route."""
    if variable.space != state.space:
        raise ValueError("variable lives over a different path space")
    n = state.space.n
    vals, scale = _scaled_ints(variable.values)
    pos = [v if v > 0 else 0 for v in vals]
    neg = [-v if v < 0 else 0 for v in vals]
    if strategy is IntegralStrategy.DEFINITION:
        if n > DEFINITION_MAX_STEPS:
            raise ResourceLimitError(
                f"definition-route integral capped at n <= {DEFINITION_MAX_STEPS}; "
                "use the trace or eigen route"
            )
        raw = _definition_part(state, pos) - _definition_part(state, neg)
    elif strategy is IntegralStrategy.TRACE:
        raw = _trace_part(pos) - _trace_part(neg)
    elif strategy is IntegralStrategy.EIGEN:
        raw = _eigen_part(pos) - _eigen_part(neg)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return Fraction(raw, scale << n)


# -- min-matrix structure ------------------------------------------------------


def min_matrix_entry(variable: RandomVariable, i: int, j: int) -> Fraction:
    """Entry (i, j) of the variable's min matrix, through the canonical split."""
    vi, vj = variable.values[i], variable.values[j]
    pi, mi = (vi, Fraction(0)) if vi > 0 else (Fraction(0), -vi)
    pj, mj = (vj, Fraction(0)) if vj > 0 else (Fraction(0), -vj)
    return min(pi, pj) - min(mi, mj)


def _exact_determinant(matrix: list[list[Fraction]]) -> Fraction:
    """Fraction Gaussian elimination with partial pivoting (independent of
    the telescoping shortcut it is used to confirm)."""
    m = [row[:] for row in matrix]
    size = len(m)
    det = Fraction(1)
    for col in range(size):
        pivot_row = next((r for r in range(col, size) if m[r][col] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != col:
            m[col], m[pivot_row] = m[pivot_row], m[col]
            det = -det
        pivot = m[col][col]
        det *= pivot
        for r in range(col + 1, size):
            factor = m[r][col] / pivot
            if factor:
                for c in range(col, size):
                    m[r][c] -= factor * m[col][c]
    return det


def min_matrix_det_check(values) -> bool:
    """Confirm the telescoping determinant of a sorted min matrix.

    For nonnegative sorted a_1 <= ... <= a_m, the matrix of pairwise minima
    has determinant a_1 * (a_2 - a_1) * ... * (a_m - a_{m-1}); the left side
    is recomputed by exact elimination.
    """
    vals = [Fraction(v) for v in values]
    if len(vals) > MIN_MATRIX_MAX:
        raise ResourceLimitError(f"min-matrix check capped at {MIN_MATRIX_MAX} values")
    if not vals:
        raise ValueError("need at least one value")
    if any(v < 0 for v in vals):
        raise ValueError("min-matrix values must be nonnegative")
    if any(a > b for a, b in zip(vals, vals[1:])):
        raise ValueError("values must be sorted ascending")
    matrix = [[min(a, b) for b in vals] for a in vals]
    telescoped = vals[0]
    for a, b in zip(vals, vals[1:]):
        telescoped *= b - a
    return _exact_determinant(matrix) == telescoped


def psd_check(variable: RandomVariable) -> bool:
    """Exact positive-semidefiniteness of a nonnegative variable's min matrix.

    Every leading principal minor is the telescoped determinant of the
    sorted leading values, so each is a product of nonnegative gaps; the
    check computes them all the same (a duplicate or zero forces every
    later minor to zero, which shortcuts the scan).
    """
    if any(v < 0 for v in variable.values):
        raise ValueError("psd check needs a nonnegative variable")
    if variable.space.size > PSD_CHECK_MAX_VALUES:
        raise ResourceLimitError(
            f"psd check capped at {PSD_CHECK_MAX_VALUES} values"
        )
    from bisect import insort

    prefix: list[Fraction] = []
    saw_zero_minor = False
    for v in variable.values:
        insort(prefix, v)
        if saw_zero_minor:
            continue
        minor = prefix[0]
        for a, b in zip(prefix, prefix[1:]):
            minor *= b - a
        if minor < 0:
            return False
        if minor == 0:
            saw_zero_minor = True
    return True


def disjoint_support_grade2_check(
    state: DecoherenceState,
    f: RandomVariable,
    g: RandomVariable,
    h: RandomVariable,
) -> bool:
    """For disjointly supported variables, confirm both grade-2 identities:
    the min-matrix identity entry by entry, and the integral identity."""
    for rv in (f, g, h):
        if rv.space != state.space:
            raise ValueError("variable lives over a different path space")
    sf, sg, sh = (set(rv.support()) for rv in (f, g, h))
    if sf & sg or sf & sh or sg & sh:
        raise ValueError("variables must have pairwise disjoint supports")
    n = state.space.n
    if n > ENTRYWISE_MAX_STEPS:
        raise ResourceLimitError(
            f"entrywise identity check capped at n <= {ENTRYWISE_MAX_STEPS}"
        )

    scale = lcm(*(v.denominator for rv in (f, g, h) for v in rv.values))
    vecs = {}
    for name, rv in (("f", f), ("g", g), ("h", h)):
        vecs[name] = [int(v * scale) for v in rv.values]
    sums = {
        "fg": [a + b for a, b in zip(vecs["f"], vecs["g"])],
        "fh": [a + b for a, b in zip(vecs["f"], vecs["h"])],
        "gh": [a + b for a, b in zip(vecs["g"], vecs["h"])],
        "fgh": [a + b + c for a, b, c in zip(vecs["f"], vecs["g"], vecs["h"])],
    }

    def min_hat(vec: list[int], i: int, j: int) -> int:
        vi, vj = vec[i], vec[j]
        pi, mi = (vi, 0) if vi > 0 else (0, -vi)
        pj, mj = (vj, 0) if vj > 0 else (0, -vj)
        return min(pi, pj) - min(mi, mj)

    size = state.space.size
    for i in range(size):
        for j in range(size):
            lhs = min_hat(sums["fgh"], i, j)
            rhs = (
                min_hat(sums["fg"], i, j)
                + min_hat(sums["fh"], i, j)
                + min_hat(sums["gh"], i, j)
                - min_hat(vecs["f"], i, j)
                - min_hat(vecs["g"], i, j)
                - min_hat(vecs["h"], i, j)
            )
            if lhs != rhs:
                return False

    def integ(rv: RandomVariable) -> Fraction:
        return integral(state, rv, IntegralStrategy.TRACE)

    lhs = integ(f + g + h)
    rhs = (
        integ(f + g) + integ(f + h) + integ(g + h)
        - integ(f) - integ(g) - integ(h)
    )
    return lhs == rhs


def nonadditivity_witness(
    state: DecoherenceState,
) -> tuple[RandomVariable, RandomVariable, Fraction]:
    """A deterministic pair of variables whose integrals fail additivity.

    Searches value patterns {0, 1, 2} on the first four paths in
    lexicographic order and returns the first pair with a nonzero gap; the
    interference structure of those four paths is the same at every horizon
    n >= 2, so the search always succeeds.
    """
    n = state.space.n
    if n < 2:
        raise ValueError("nonadditivity needs n >= 2")
    space = state.space

    def build(pattern) -> RandomVariable:
        values = [Fraction(0)] * space.size
        for j, v in enumerate(pattern):
            values[j] = Fraction(v)
        return RandomVariable(space, tuple(values))

    for f_pattern in product(range(3), repeat=4):
        f = build(f_pattern)
        int_f = integral(state, f)
        for g_pattern in product(range(3), repeat=4):
            g = build(g_pattern)
            gap = integral(state, f + g) - int_f - integral(state, g)
            if gap != 0:
                return f, g, gap
    raise RuntimeError("no witness found; the search space should contain one")
