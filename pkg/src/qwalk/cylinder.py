"""Cylinder sets of the infinite path space and limit-based measure extension.

A cylinder event pins down finitely many initial steps and leaves the rest
free; its measure is the truncated measure of its base, which is well
defined because appending a free step never changes the measure.  Events
beyond the cylinder algebra are described symbolically and approximated by
cylindrical hulls whose measures may or may not settle down; the verdicts
reported here are numerical findings, not proofs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

from .decoherence import DecoherenceState, Event
from .errors import ResourceLimitError
from .exact import Dyadic, RootTwoScaled
from .paths import PathSpace, change_residue_counts
from .qmeasure import Strategy, mu, mu_from_census

APPROXIMANT_MAX_LEVEL = 24
COMBINATION_CAP = 1_000_000
LIMIT_MAX_LEVEL = 512


@dataclass(frozen=True, eq=False)
class CylinderEvent:
    """base * {0,1} * {0,1} * ... -- an event pinned on its first `level` steps."""

    level: int
    base: Event

    def __post_init__(self) -> None:
        if self.level != self.base.space.n:
            raise ValueError("cylinder level must match the base's horizon")

    @classmethod
    def from_indices(cls, level: int, indices) -> "CylinderEvent":
        if level < 0:
            raise ValueError("cylinder level must be nonnegative")
        if level == 0:
            # level-0 bases live over the one-point space of the empty
            # prefix; re-express over one step, which is the same event
            members = set(indices)
            if not members <= {0}:
                raise ValueError("level-0 base can only contain index 0")
            indices = (0, 1) if members else ()
            level = 1
        return cls(level, Event.from_indices(PathSpace(level), indices))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CylinderEvent):
            return NotImplemented
        top = max(self.level, other.level)
        return refine(self, top).base.mask == refine(other, top).base.mask

    def __repr__(self) -> str:
        return f"CylinderEvent(level={self.level}, base={self.base.to_tuple()})"


def refine(cyl: CylinderEvent, to_level: int) -> CylinderEvent:
    """Re-express the same cylinder event with a finer base."""
    extra = to_level - cyl.level
    if extra < 0:
        raise ValueError("cannot refine to a coarser level")
    if extra == 0:
        return cyl
    if to_level > APPROXIMANT_MAX_LEVEL:
        raise ResourceLimitError(
            f"explicit cylinder bases are capped at level {APPROXIMANT_MAX_LEVEL}"
        )
    block = (1 << (1 << extra)) - 1
    mask = 0
    for j in cyl.base.indices():
        mask |= block << (j << extra)
    return CylinderEvent(to_level, Event(PathSpace(to_level), mask))


def mu_cyl(cyl: CylinderEvent) -> Dyadic:
    """Measure of the cylinder event: the truncated measure of its base."""
    return mu(DecoherenceState(cyl.base.space), cyl.base)


def elementary(level: int, j: int) -> CylinderEvent:
    """The cylinder of all paths extending one fixed length-`level` prefix."""
    return CylinderEvent.from_indices(level, (j,))


# -- symbolic events ---------------------------------------------------------


@dataclass(frozen=True)
class EventualPath:
    """An infinite path given by a finite run of step bits then a repeated bit."""

    prefix: tuple[int, ...]
    repeat: int

    def __post_init__(self) -> None:
        if self.repeat not in (0, 1) or any(b not in (0, 1) for b in self.prefix):
            raise ValueError("step bits must be 0 or 1")

    def step(self, i: int) -> int:
        """Site at time i >= 1."""
        if i < 1:
            raise ValueError("steps are numbered from 1")
        return self.prefix[i - 1] if i <= len(self.prefix) else self.repeat

    def index_at(self, n: int) -> int:
        """The length-n prefix of this path, as a path index."""
        j = 0
        for i in range(1, n + 1):
            j = (j << 1) | self.step(i)
        return j


@dataclass(frozen=True)
class FinitePathSet:
    """A finite set of eventually-constant paths."""

    paths: tuple[EventualPath, ...]


@dataclass(frozen=True)
class AtMostKOnes:
    """All paths that visit site 1 at most `limit` times."""

    limit: int

    def __post_init__(self) -> None:
        if self.limit < 0:
            raise ValueError("limit must be nonnegative")


@dataclass(frozen=True)
class ComplementOfFinitePathSet:
    """Everything except a finite set of eventually-constant paths."""

    paths: tuple[EventualPath, ...]


@dataclass(frozen=True)
class FinitelyManyOnes:
    """All paths that visit site 1 only finitely often."""


@dataclass(frozen=True)
class InfinitelyManyOnes:
    """All paths that visit site 1 infinitely often.

    The disjoint partner of FinitelyManyOnes: the two never witness
    strong disjointness because both hulls are the full space at every
    level, and both limit sequences are constantly 1.
    """


SymbolicEvent = Union[
    FinitePathSet,
    AtMostKOnes,
    ComplementOfFinitePathSet,
    FinitelyManyOnes,
    InfinitelyManyOnes,
]

ALL_ZEROS = EventualPath((), 0)
ALL_ONES_AFTER_START = EventualPath((1,), 1)


def _finite_prefix_indices(paths: tuple[EventualPath, ...], n: int) -> set[int]:
    return {p.index_at(n) for p in paths}


def _at_most_count(n: int, k: int) -> int:
    return sum(math.comb(n, t) for t in range(min(k, n) + 1))


def _at_most_indices(n: int, k: int):
    if _at_most_count(n, k) > COMBINATION_CAP:
        raise ResourceLimitError(
            f"at-most-{k}-ones approximant at level {n} exceeds "
            f"{COMBINATION_CAP} members"
        )
    from itertools import combinations

    for t in range(min(k, n) + 1):
        for positions in combinations(range(n), t):
            j = 0
            for b in positions:
                j |= 1 << b
            yield j


def _census_of_indices(indices) -> tuple[int, int, int, int]:
    counts = [0, 0, 0, 0]
    for j in indices:
        counts[(j ^ (j >> 1)).bit_count() & 3] += 1
    return tuple(counts)


def _at_most_census(n: int, k: int) -> tuple[int, int, int, int]:
    """Census of all paths with at most k ones, by their one-run structure.

    A path whose one-steps occupy `runs` maximal blocks changes site twice
    per block, minus one if the last step sits on site 1.
    """
    if _at_most_count(n, k) > COMBINATION_CAP:
        raise ResourceLimitError(
            f"at-most-{k}-ones census at level {n} exceeds {COMBINATION_CAP} members"
        )
    from itertools import combinations

    counts = [0, 0, 0, 0]
    counts[0] += 1  # the all-zeros path
    for t in range(1, min(k, n) + 1):
        for positions in combinations(range(1, n + 1), t):
            runs = 1
            for a, b in zip(positions, positions[1:]):
                if b != a + 1:
                    runs += 1
            c = 2 * runs - (1 if positions[-1] == n else 0)
            counts[c & 3] += 1
    return tuple(counts)


def approximant(event: SymbolicEvent, n: int) -> CylinderEvent:
    """The level-n cylindrical hull: all paths whose first n steps extend into
    the event.  Hulls decrease with n and contain the event."""
    if n < 0:
        raise ValueError("approximant level must be nonnegative")
    if n == 0:
        if isinstance(event, FinitePathSet) and not event.paths:
            return CylinderEvent.from_indices(0, ())
        return CylinderEvent.from_indices(0, (0,))
    if n > APPROXIMANT_MAX_LEVEL:
        raise ResourceLimitError(
            f"explicit approximants are capped at level {APPROXIMANT_MAX_LEVEL}; "
            "limit tables use census generators instead"
        )
    space = PathSpace(n)
    if isinstance(event, FinitePathSet):
        return CylinderEvent(n, Event.from_indices(space, _finite_prefix_indices(event.paths, n)))
    if isinstance(event, AtMostKOnes):
        return CylinderEvent(n, Event.from_indices(space, _at_most_indices(n, event.limit)))
    if isinstance(event, (ComplementOfFinitePathSet, FinitelyManyOnes, InfinitelyManyOnes)):
        # every finite prefix extends into these events, so the hull is full
        return CylinderEvent(n, Event.full(space))
    raise ValueError(f"unsupported symbolic event {event!r}")


def approximant_indices(event: SymbolicEvent, n: int) -> frozenset[int] | None:
    """Member indices of the level-n hull, or None when the hull is the
    full space (kept symbolic so large levels stay cheap)."""
    if n < 1:
        raise ValueError("need level >= 1")
    if isinstance(event, FinitePathSet):
        return frozenset(_finite_prefix_indices(event.paths, n))
    if isinstance(event, AtMostKOnes):
        return frozenset(_at_most_indices(n, event.limit))
    if isinstance(event, (ComplementOfFinitePathSet, FinitelyManyOnes, InfinitelyManyOnes)):
        return None
    raise ValueError(f"unsupported symbolic event {event!r}")


def limit_term(event: SymbolicEvent, n: int) -> Dyadic:
    """The level-n term of the event's measure-limit sequence.

    For hull-described events this is the measure of the decreasing hull.
    A complement of a finite path set is instead the increasing union of
    the complements of the inner set's hulls, so its terms are the measures
    of those complements; both exact, via residue censuses only.
    """
    if n < 1:
        raise ValueError("need level >= 1")
    if isinstance(event, FinitePathSet):
        return mu_from_census(
            _census_of_indices(_finite_prefix_indices(event.paths, n)), n
        )
    if isinstance(event, AtMostKOnes):
        return mu_from_census(_at_most_census(n, event.limit), n)
    if isinstance(event, ComplementOfFinitePathSet):
        full = change_residue_counts(n)
        inner = _census_of_indices(_finite_prefix_indices(event.paths, n))
        return mu_from_census(tuple(f - i for f, i in zip(full, inner)), n)
    if isinstance(event, (FinitelyManyOnes, InfinitelyManyOnes)):
        return mu_from_census(change_residue_counts(n), n)
    raise ValueError(f"unsupported symbolic event {event!r}")


# -- limit reports -----------------------------------------------------------


class LimitVerdict(Enum):
    CONVERGED = "converged"
    DIVERGED = "diverged"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class LimitReport:
    """Numerical verdict on a measure sequence, with the full value table."""

    values: tuple[tuple[int, Dyadic, float], ...]
    verdict: LimitVerdict
    estimate: float | None
    at_n: int | None
    window: int
    tol: float
    n_range: tuple[int, int]
    sequence_kind: str


def classify_sequence(
    values: list[float],
    window: int,
    tol: float,
    blow_up: float = 1e6,
    growth_run: int = 10,
) -> tuple[LimitVerdict, float | None, int | None]:
    """Shared verdict rule for measure sequences indexed 1, 2, 3, ...

    Diverged: some value exceeds `blow_up` after `growth_run` consecutive
    increases.  Converged: the trailing run of consecutive differences below
    `tol` spans at least `window` values; the estimate is the final value and
    the attachment point is where that window is first complete.
    """
    if window < 2:
        raise ValueError("window must be at least 2")
    increases = 0
    for t in range(1, len(values)):
        increases = increases + 1 if values[t] > values[t - 1] else 0
        if values[t] > blow_up and increases >= growth_run:
            return LimitVerdict.DIVERGED, None, t + 1
    run_start = len(values) - 1
    while run_start > 0 and abs(values[run_start] - values[run_start - 1]) < tol:
        run_start -= 1
    trailing = len(values) - run_start  # values inside the stable tail
    if trailing >= window:
        return LimitVerdict.CONVERGED, values[-1], run_start + window
    return LimitVerdict.UNDETERMINED, None, None


def limit_mu_hat(
    event: SymbolicEvent,
    n_max: int,
    window: int = 5,
    tol: float = 1e-9,
    blow_up: float = 1e6,
    growth_run: int = 10,
    max_workers: int = 1,
) -> LimitReport:
    """Tabulate the event's measure sequence and classify its limit.

    Levels are independent, so `max_workers` > 1 fans the per-level terms
    over a thread pool; results merge in level order either way.
    """
    if not 2 <= window <= n_max:
        raise ValueError("need n_max >= window >= 2")
    if n_max > LIMIT_MAX_LEVEL:
        raise ResourceLimitError(f"limit tables are capped at n <= {LIMIT_MAX_LEVEL}")
    levels = range(1, n_max + 1)
    if max_workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            terms = list(pool.map(lambda n: limit_term(event, n), levels))
    else:
        terms = [limit_term(event, n) for n in levels]
    rows = [(n, exact, float(exact)) for n, exact in zip(levels, terms)]
    verdict, estimate, at_n = classify_sequence(
        [r[2] for r in rows], window, tol, blow_up, growth_run
    )
    kind = (
        "increasing-complements"
        if isinstance(event, ComplementOfFinitePathSet)
        else "decreasing-hulls"
    )
    return LimitReport(
        values=tuple(rows),
        verdict=verdict,
        estimate=estimate,
        at_n=at_n,
        window=window,
        tol=tol,
        n_range=(1, n_max),
        sequence_kind=kind,
    )


# -- concrete sequences ------------------------------------------------------

_BLOCK = (2, 4, 6)  # the three-step block visiting site 1 exactly once mid-run


@dataclass(frozen=True)
class BlockMeasure:
    index: int
    value: Fraction
    provenance: str  # "direct" or "extrapolated"


def _block_product_indices(i: int) -> list[int]:
    members = [0]
    for _ in range(i):
        members = [(j << 3) | b for j in members for b in _BLOCK]
    return members


def repeated_block_measures(i_max: int, direct_limit: int = 4) -> list[BlockMeasure]:
    """Measures of the nested block-product cylinders, which grow as (9/8)**i.

    Terms up to `direct_limit` are computed directly from the level-3i base
    (entry sums at small levels, residue censuses at level 12); later terms
    extrapolate the verified ratio and are labeled as such.
    """
    if i_max < 1:
        raise ValueError("need i_max >= 1")
    ratio = Fraction(9, 8)
    out = []
    for i in range(1, min(i_max, direct_limit) + 1):
        level = 3 * i
        members = _block_product_indices(i)
        space = PathSpace(level)
        state = DecoherenceState(space)
        event = Event.from_indices(space, members)
        if level <= 9:
            exact = mu(state, event, Strategy.DENSE)
        else:
            exact = mu(state, event, Strategy.RANK2)
        value = exact.as_fraction()
        if value != ratio ** i:
            raise RuntimeError(
                f"block-product measure at level {level} broke the expected ratio"
            )
        out.append(BlockMeasure(i, value, "direct"))
    for i in range(min(i_max, direct_limit) + 1, i_max + 1):
        out.append(BlockMeasure(i, ratio ** i, "extrapolated"))
    return out


def repeated_block_verdict(
    i_max: int = 130,
    window: int = 5,
    tol: float = 1e-9,
    blow_up: float = 1e6,
    growth_run: int = 10,
) -> LimitVerdict:
    """Verdict of the limit classifier on the block-product measure sequence."""
    series = [float(term.value) for term in repeated_block_measures(i_max)]
    verdict, _, _ = classify_sequence(series, window, tol, blow_up, growth_run)
    return verdict


def variation_lower_bound(n: int) -> int:
    """Variation witnessed by the partition into all level-n elementary
    cylinders: (2**n equal terms of sqrt(1/2**n)) squared, exactly 2**n."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    term_root = RootTwoScaled.pow2_half(-n)  # sqrt of one elementary measure
    total = (1 << n) * term_root
    return int((total * total).to_dyadic().as_fraction())


def change_residue_profile(n: int) -> tuple[int, int, int, int]:
    """Residue profile of change counts mod 4 over the whole level-n space."""
    return change_residue_counts(n)


def change_residue_profile_closed_form(n: int) -> tuple[int, int, int, int]:
    """The same profile from its closed form, evaluated exactly in Z[sqrt(2)].

    Each class holds 2**(n-2) + 2**(n/2 - 1) * cos((n - 2j) * pi / 4) paths;
    the root-two parts always cancel, leaving an integer.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    base = RootTwoScaled.pow2_half(2 * n - 4)
    wave = RootTwoScaled.pow2_half(n - 2)
    out = []
    for j in range(4):
        value = base + wave * RootTwoScaled.cos_eighth(n - 2 * j)
        out.append(int(value.to_dyadic().as_fraction()))
    return tuple(out)


def complement_of_constant_closed_form(n: int) -> Dyadic:
    """Closed form for the level-n term of the stays-nowhere complement event
    (all paths except the one that never leaves site 0):

        1 + 1/2**n - cos(n*pi/4) / 2**(n/2 - 1)

    evaluated exactly; the root-two parts cancel for every n.  The sign of
    the cosine term here is the one the residue-census route confirms.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    value = (
        RootTwoScaled.from_int(1)
        + RootTwoScaled.pow2_half(-2 * n)
        - RootTwoScaled.pow2_half(2 - n) * RootTwoScaled.cos_eighth(n)
    )
    return value.to_dyadic()
