"""Exact-arithmetic model of outcomes, states, events, acts, and SEU preferences.

Everything is immutable after construction and every comparison is made with
exact rationals (`fractions.Fraction`), so strict-inequality checks are
decidable. Non-generic inputs (ties in comparisons a mechanism relies on)
raise :class:`GenericityViolation` instead of being tie-broken.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import (
    DimensionMismatch,
    GenericityViolation,
    ResourceBudgetError,
    SuvoteError,
)

Rational = Fraction


def frac_to_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def frac_from_str(s: str) -> Fraction:
    if isinstance(s, Fraction):
        return s
    text = str(s).strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


@dataclass(frozen=True)
class OutcomeSpace:
    """Ordered set of distinct outcome names."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.labels) < 2:
            raise SuvoteError("outcome space needs at least 2 outcomes")
        if len(set(self.labels)) != len(self.labels):
            raise SuvoteError("outcome labels must be distinct")

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise SuvoteError(f"unknown outcome {label!r}") from None


@dataclass(frozen=True)
class StateSpace:
    """Ordered set of distinct state names. Sub-spaces of size 1 are allowed."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.labels) < 1:
            raise SuvoteError("state space needs at least 1 state")
        if len(set(self.labels)) != len(self.labels):
            raise SuvoteError("state labels must be distinct")

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise SuvoteError(f"unknown state {label!r}") from None

    def full_event(self) -> "Event":
        return Event(self, (1 << self.size) - 1)

    def empty_event(self) -> "Event":
        return Event(self, 0)

    def event(self, labels: Iterable[str]) -> "Event":
        mask = 0
        for lab in labels:
            mask |= 1 << self.index(lab)
        return Event(self, mask)


@dataclass(frozen=True)
class Event:
    """Subset of a state space, stored as a bitmask over state indices."""

    space: StateSpace
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.space.size:
            raise DimensionMismatch("event mask outside its state space")

    def __bool__(self) -> bool:
        return self.mask != 0

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, state: int) -> bool:
        return bool(self.mask >> state & 1)

    def indices(self) -> Iterator[int]:
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def labels(self) -> tuple[str, ...]:
        return tuple(self.space.labels[i] for i in self.indices())

    def union(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.mask | other.mask)

    def intersect(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.mask & other.mask)

    def minus(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.space, self.mask & ~other.mask)

    def complement(self) -> "Event":
        return Event(self.space, ~self.mask & (1 << self.space.size) - 1)

    def issubset(self, other: "Event") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def subspace(self) -> StateSpace:
        """State space consisting of this event's members, in parent order."""
        if not self.mask:
            raise SuvoteError("cannot build a sub-space from the empty event")
        return StateSpace(tuple(self.space.labels[i] for i in self.indices()))

    def restrict(self, sub: StateSpace) -> "Event":
        """Translate to an event of `sub` (all members must be states of `sub`)."""
        mask = 0
        for i in self.indices():
            mask |= 1 << sub.index(self.space.labels[i])
        return Event(sub, mask)

    def _check(self, other: "Event") -> None:
        if other.space != self.space:
            raise DimensionMismatch("events live on different state spaces")

    def __str__(self) -> str:
        return "{" + ",".join(self.labels()) + "}"


@dataclass(frozen=True)
class Act:
    """Total map from states to outcomes."""

    space: StateSpace
    outcomes: OutcomeSpace
    assignment: tuple[int, ...]

    def __post_init__(self):
        if len(self.assignment) != self.space.size:
            raise DimensionMismatch("act must assign an outcome to every state")
        for x in self.assignment:
            if not 0 <= x < self.outcomes.size:
                raise DimensionMismatch("act assigns an unknown outcome")

    @classmethod
    def from_labels(cls, space: StateSpace, outcomes: OutcomeSpace,
                    mapping: dict[str, str]) -> "Act":
        return cls(space, outcomes,
                   tuple(outcomes.index(mapping[s]) for s in space.labels))

    def outcome_at(self, state: int) -> int:
        return self.assignment[state]

    def label_at(self, state_label: str) -> str:
        return self.outcomes.labels[self.assignment[self.space.index(state_label)]]

    def event_where(self, outcome: int) -> Event:
        mask = 0
        for i, x in enumerate(self.assignment):
            if x == outcome:
                mask |= 1 << i
        return Event(self.space, mask)

    def to_json(self) -> dict[str, str]:
        return {s: self.outcomes.labels[x]
                for s, x in zip(self.space.labels, self.assignment)}

    def __str__(self) -> str:
        return "(" + ", ".join(f"{s}:{self.outcomes.labels[x]}"
                               for s, x in zip(self.space.labels, self.assignment)) + ")"


@dataclass(frozen=True)
class FeasibilityMap:
    """Per-state nonempty sets of available outcomes."""

    space: StateSpace
    outcomes: OutcomeSpace
    available: tuple[frozenset[int], ...]

    def __post_init__(self):
        if len(self.available) != self.space.size:
            raise DimensionMismatch("feasibility must cover every state")
        for s, av in enumerate(self.available):
            if not av:
                raise SuvoteError(f"no outcome available in state {self.space.labels[s]}")
            for x in av:
                if not 0 <= x < self.outcomes.size:
                    raise DimensionMismatch("unknown outcome in feasibility map")

    @classmethod
    def from_labels(cls, space: StateSpace, outcomes: OutcomeSpace,
                    table: dict[str, Iterable[str]]) -> "FeasibilityMap":
        avail = tuple(frozenset(outcomes.index(x) for x in table[s])
                      for s in space.labels)
        return cls(space, outcomes, avail)

    @classmethod
    def unconstrained(cls, space: StateSpace, outcomes: OutcomeSpace) -> "FeasibilityMap":
        full = frozenset(range(outcomes.size))
        return cls(space, outcomes, tuple(full for _ in space.labels))

    def allows(self, state: int, outcome: int) -> bool:
        return outcome in self.available[state]

    def act_feasible(self, act: Act) -> bool:
        return all(x in self.available[s] for s, x in enumerate(act.assignment))


class Valuation:
    """Injective valuation over outcomes, normalized to min 0 and max 1."""

    __slots__ = ("outcomes", "values")

    def __init__(self, outcomes: OutcomeSpace, values: Sequence[Fraction]):
        values = tuple(Fraction(v) for v in values)
        if len(values) != outcomes.size:
            raise DimensionMismatch("valuation must cover every outcome")
        if len(set(values)) != len(values):
            raise GenericityViolation("valuation is not injective")
        if min(values) != 0 or max(values) != 1:
            raise SuvoteError("valuation must be normalized (min 0, max 1)")
        self.outcomes = outcomes
        self.values = values

    def value(self, outcome: int) -> Fraction:
        return self.values[outcome]

    def prefers(self, x: int, y: int) -> bool:
        return self.values[x] > self.values[y]

    def __eq__(self, other) -> bool:
        return (isinstance(other, Valuation)
                and self.outcomes == other.outcomes and self.values == other.values)

    def __hash__(self) -> int:
        return hash((self.outcomes, self.values))

    def __repr__(self) -> str:
        pairs = ", ".join(f"{l}={frac_to_str(v)}"
                          for l, v in zip(self.outcomes.labels, self.values))
        return f"Valuation({pairs})"

    def to_json(self) -> dict[str, str]:
        return {l: frac_to_str(v) for l, v in zip(self.outcomes.labels, self.values)}

    @classmethod
    def from_json(cls, outcomes: OutcomeSpace, data: dict[str, str]) -> "Valuation":
        return cls(outcomes, [frac_from_str(data[l]) for l in outcomes.labels])


class Belief:
    """Strictly positive probability over states, summing to exactly 1.

    Full injectivity over all events is *not* enforced at construction
    (it is exponential to check); `check_genericity` verifies the
    comparisons a mechanism actually evaluates, or everything on demand.
    """

    __slots__ = ("space", "mass", "_prob_cache")

    def __init__(self, space: StateSpace, mass: Sequence[Fraction]):
        mass = tuple(Fraction(m) for m in mass)
        if len(mass) != space.size:
            raise DimensionMismatch("belief must cover every state")
        if any(m <= 0 for m in mass):
            raise SuvoteError("belief masses must be strictly positive")
        if sum(mass) != 1:
            raise SuvoteError("belief masses must sum to exactly 1")
        self.space = space
        self.mass = mass
        self._prob_cache: dict[int, Fraction] = {}

    def prob(self, event: Event) -> Fraction:
        if event.space != self.space:
            raise DimensionMismatch("event is not on this belief's state space")
        return self.prob_mask(event.mask)

    def prob_mask(self, mask: int) -> Fraction:
        cached = self._prob_cache.get(mask)
        if cached is None:
            total = Fraction(0)
            m = mask
            while m:
                low = m & -m
                total += self.mass[low.bit_length() - 1]
                m ^= low
            cached = self._prob_cache[mask] = total
        return cached

    def __eq__(self, other) -> bool:
        return (isinstance(other, Belief)
                and self.space == other.space and self.mass == other.mass)

    def __hash__(self) -> int:
        return hash((self.space, self.mass))

    def __repr__(self) -> str:
        pairs = ", ".join(f"{l}={frac_to_str(m)}"
                          for l, m in zip(self.space.labels, self.mass))
        return f"Belief({pairs})"

    def to_json(self) -> dict[str, str]:
        return {l: frac_to_str(m) for l, m in zip(self.space.labels, self.mass)}

    @classmethod
    def from_json(cls, space: StateSpace, data: dict[str, str]) -> "Belief":
        return cls(space, [frac_from_str(data[l]) for l in space.labels])


@dataclass(frozen=True)
class Preference:
    """One voter: an injective normalized valuation plus a positive belief."""

    valuation: Valuation
    belief: Belief

    def to_json(self) -> dict:
        return {"valuation": self.valuation.to_json(), "belief": self.belief.to_json()}


@dataclass(frozen=True)
class Profile:
    """Ordered list of n >= 2 preferences."""

    prefs: tuple[Preference, ...]

    def __post_init__(self):
        if len(self.prefs) < 2:
            raise SuvoteError("a profile needs at least 2 voters")

    @property
    def n(self) -> int:
        return len(self.prefs)

    def replace(self, voter: int, pref: Preference) -> "Profile":
        prefs = list(self.prefs)
        prefs[voter] = pref
        return Profile(tuple(prefs))

    def transpose(self, i: int, j: int) -> "Profile":
        prefs = list(self.prefs)
        prefs[i], prefs[j] = prefs[j], prefs[i]
        return Profile(tuple(prefs))

    def permute(self, sigma: Sequence[int]) -> "Profile":
        """Profile whose voter i holds the preference of voter sigma(i)."""
        return Profile(tuple(self.prefs[sigma[i]] for i in range(self.n)))

    def to_json(self) -> dict:
        space = self.prefs[0].belief.space
        outcomes = self.prefs[0].valuation.outcomes
        return {
            "n": self.n,
            "states": list(space.labels),
            "outcomes": list(outcomes.labels),
            "voters": [p.to_json() for p in self.prefs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Profile":
        space = StateSpace(tuple(data["states"]))
        outcomes = OutcomeSpace(tuple(data["outcomes"]))
        prefs = tuple(
            Preference(Valuation.from_json(outcomes, v["valuation"]),
                       Belief.from_json(space, v["belief"]))
            for v in data["voters"]
        )
        if len(prefs) != data.get("n", len(prefs)):
            raise SuvoteError("profile voter count does not match 'n'")
        return cls(prefs)


# ---------------------------------------------------------------------------
# elementary operations


def expected_utility(act: Act, pref: Preference) -> Fraction:
    """Exact subjective expected utility of `act` under one preference."""
    belief = pref.belief
    if act.space != belief.space:
        raise DimensionMismatch("act and preference live on different state spaces")
    if act.outcomes != pref.valuation.outcomes:
        raise DimensionMismatch("act and preference use different outcome spaces")
    values = pref.valuation.values
    return sum((m * values[x] for m, x in zip(belief.mass, act.assignment)),
               Fraction(0))


def conditional_belief(belief: Belief, cond: Event) -> Belief:
    """Belief renormalized on `cond`, defined over the sub-space of `cond`."""
    if cond.space != belief.space:
        raise DimensionMismatch("conditioning event is not on the belief's space")
    if not cond:
        raise SuvoteError("cannot condition on the empty event")
    sub = cond.subspace()
    total = belief.prob(cond)
    return Belief(sub, [belief.mass[i] / total for i in cond.indices()])


def concat(space: StateSpace, outcomes: OutcomeSpace,
           pieces: Sequence[tuple[Event, Act]]) -> Act:
    """Join sub-acts defined on a partition of `space` into one act."""
    assignment: list[int | None] = [None] * space.size
    seen = 0
    for event, sub in pieces:
        if event.space != space:
            raise DimensionMismatch("partition cell is not on the target space")
        if sub.outcomes != outcomes:
            raise DimensionMismatch("sub-act uses a different outcome space")
        if event.mask & seen:
            raise SuvoteError("partition cells overlap")
        seen |= event.mask
        for local, parent in enumerate(event.indices()):
            if sub.space.labels[local] != space.labels[parent]:
                raise DimensionMismatch("sub-act states do not match its cell")
            assignment[parent] = sub.assignment[local]
    if seen != (1 << space.size) - 1:
        raise SuvoteError("partition cells do not cover the state space")
    return Act(space, outcomes, tuple(assignment))  # type: ignore[arg-type]


def supporters(profile: Profile, a: int, b: int) -> tuple[frozenset[int], frozenset[int]]:
    """Split voters into those valuing `a` above `b` and the rest.

    Injective valuations make the split exhaustive: the two sets always
    partition the voter set.
    """
    if a == b:
        raise SuvoteError("supporter split needs two distinct outcomes")
    n_a, n_b = set(), set()
    for i, pref in enumerate(profile.prefs):
        if pref.valuation.prefers(a, b):
            n_a.add(i)
        else:
            n_b.add(i)
    return frozenset(n_a), frozenset(n_b)


def eta(profile: Profile, voters: Iterable[int], e: Event, f: Event) -> int:
    """Number of listed voters whose belief puts strictly more mass on `e` than `f`.

    A tie p_i(e) = p_i(f) for a listed voter makes the count ill-defined and
    raises GenericityViolation.
    """
    count = 0
    for i in voters:
        pe = profile.prefs[i].belief.prob(e)
        pf = profile.prefs[i].belief.prob(f)
        if pe == pf:
            raise GenericityViolation(
                f"voter {i} ties {e} against {f}", voter=i, detail=(e, f))
        if pe > pf:
            count += 1
    return count


def theta_mix(belief: Belief, part: Event, theta: Fraction) -> Belief:
    """Reweigh `belief` so `part` carries total mass theta, conditionals intact."""
    theta = Fraction(theta)
    if part.space != belief.space:
        raise DimensionMismatch("mixing event is not on the belief's space")
    if not part or part.mask == belief.space.full_event().mask:
        raise SuvoteError("mixing event must be nonempty and proper")
    if not 0 < theta < 1:
        raise SuvoteError("mixing weight must lie strictly between 0 and 1")
    inside = belief.prob(part)
    outside = 1 - inside
    mass = []
    for i, m in enumerate(belief.mass):
        if i in part:
            mass.append(theta * m / inside)
        else:
            mass.append((1 - theta) * m / outside)
    return Belief(belief.space, mass)


class Trilean(enum.Enum):
    """Result of a check whose exact form may exceed its budget."""

    TRUE = "true"
    FALSE = "false"
    INCONCLUSIVE = "inconclusive"

    def __bool__(self) -> bool:
        if self is Trilean.INCONCLUSIVE:
            raise SuvoteError("inconclusive result used as a boolean")
        return self is Trilean.TRUE


def _min_positive_gap_on(pref: Preference, part: Event) -> Fraction | None:
    """Smallest positive expected-value gap between sub-act pairs on `part`."""
    values = pref.valuation.values
    states = list(part.indices())
    best: Fraction | None = None
    outcomes = range(pref.valuation.outcomes.size)
    for f_sub in itertools.product(outcomes, repeat=len(states)):
        for g_sub in itertools.product(outcomes, repeat=len(states)):
            gap = sum((pref.belief.mass[s] * (values[fx] - values[gx])
                       for s, fx, gx in zip(states, f_sub, g_sub)), Fraction(0))
            if gap > 0 and (best is None or gap < best):
                best = gap
    return best


def is_lexicographic(pref: Preference, part: Event, budget: int = 4096) -> Trilean:
    """Does any strict ranking of sub-acts on `part` dominate the rest of the act?

    Exact when the sub-act pair enumeration fits the budget; otherwise falls
    back to the sufficient bound (smallest positive gap on `part` must exceed
    the total mass outside, times the full valuation spread of 1) and reports
    INCONCLUSIVE when that bound fails.
    """
    if not part:
        raise SuvoteError("lexicographic check needs a nonempty event")
    n_out = pref.valuation.outcomes.size
    inside = len(part)
    outside = pref.belief.space.size - inside
    if outside == 0:
        return Trilean.TRUE
    exhaustive = n_out ** inside * n_out ** outside <= budget
    if n_out ** (2 * inside) > budget and not exhaustive:
        return Trilean.INCONCLUSIVE
    gap = _min_positive_gap_on(pref, part)
    if gap is None:
        # no sub-act pair is strictly ranked on `part`; the condition is vacuous
        return Trilean.TRUE
    out_mass = pref.belief.prob(part.complement())
    if exhaustive:
        # the worst drop outside is exactly -out_mass (spread of values is 1)
        return Trilean.TRUE if gap > out_mass else Trilean.FALSE
    return Trilean.TRUE if gap > out_mass else Trilean.INCONCLUSIVE


def lexicographic_counterexample(pref: Preference, part: Event):
    """Exhibit an act pair violating `part`-dominance, or None. Small spaces only."""
    space = pref.belief.space
    outcomes = range(pref.valuation.outcomes.size)
    acts = [Act(space, pref.valuation.outcomes, assign)
            for assign in itertools.product(outcomes, repeat=space.size)]
    values = pref.valuation.values
    for f, g in itertools.permutations(acts, 2):
        part_gap = sum((pref.belief.mass[s] * (values[f.assignment[s]] - values[g.assignment[s]])
                        for s in part.indices()), Fraction(0))
        if part_gap > 0 and expected_utility(f, pref) <= expected_utility(g, pref):
            return f, g
    return None


def is_dominant(belief: Belief, c: Event, subset_bound: int = 20) -> bool:
    """Is the smallest probability gap inside `c` larger than the mass outside?

    Exact over all pairs of distinct subsets of `c`; 2**|c| subset sums are
    enumerated, so |c| is capped by `subset_bound`.
    """
    if not c:
        raise SuvoteError("dominance check needs a nonempty event")
    k = len(c)
    if k > subset_bound:
        raise ResourceBudgetError(
            f"dominance check over {k} states needs 2^{k} subset sums")
    states = list(c.indices())
    sums = sorted(
        sum((belief.mass[s] for j, s in enumerate(states) if sub >> j & 1),
            Fraction(0))
        for sub in range(1 << k)
    )
    min_gap = min((b - a for a, b in zip(sums, sums[1:])), default=None)
    if min_gap is None:
        return True
    outside = belief.prob(c.complement())
    return min_gap > outside


def min_subset_gap(belief: Belief, c: Event, subset_bound: int = 20) -> Fraction:
    """Smallest |p(E) - p(F)| over distinct subsets E, F of `c` (0 on a tie)."""
    if len(c) > subset_bound:
        raise ResourceBudgetError("subset gap over too many states")
    states = list(c.indices())
    sums = sorted(
        sum((belief.mass[s] for j, s in enumerate(states) if sub >> j & 1),
            Fraction(0))
        for sub in range(1 << len(states))
    )
    return min((b - a for a, b in zip(sums, sums[1:])), default=Fraction(1))


def make_dominant(space: StateSpace, c: Event,
                  conditional_on: Belief, conditional_off: Belief,
                  subset_bound: int = 20) -> Belief:
    """Build a `c`-dominant belief realizing both given conditionals exactly.

    The weight put on `c` is chosen just past the exact threshold where the
    smallest subset gap inside `c` exceeds the leftover mass.
    """
    if not c:
        raise SuvoteError("dominant-belief construction needs a nonempty event")
    comp = c.complement()
    if not comp:
        raise SuvoteError("dominant-belief construction needs a proper event")
    sub_on, sub_off = c.subspace(), comp.subspace()
    if conditional_on.space != sub_on or conditional_off.space != sub_off:
        raise DimensionMismatch("conditionals must live on the event sub-spaces")
    gap = min_subset_gap(conditional_on, sub_on.full_event(), subset_bound)
    if gap == 0:
        raise GenericityViolation(
            "conditional distribution ties two subsets; no dominant extension")
    theta = (2 + gap) / (2 * (1 + gap))  # midpoint above 1/(1+gap)
    mass = [Fraction(0)] * space.size
    for local, parent in enumerate(c.indices()):
        mass[parent] = theta * conditional_on.mass[local]
    for local, parent in enumerate(comp.indices()):
        mass[parent] = (1 - theta) * conditional_off.mass[local]
    return Belief(space, mass)


def tau_top(valuation: Valuation, pool: Iterable[int]) -> int:
    """Unique valuation maximizer within a nonempty outcome pool."""
    pool = list(pool)
    if not pool:
        raise SuvoteError("top-outcome selection needs a nonempty pool")
    return max(pool, key=lambda x: valuation.values[x])


BeliefComparison = tuple  # ("belief", voter, Event, Event)
ValuationComparison = tuple  # ("valuation", voter, outcome, outcome)


@dataclass(frozen=True)
class GenericityReport:
    violations: tuple[tuple, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_genericity(profile: Profile, comparisons: Iterable[tuple] = (),
                     full: bool = False, full_bound: int = 12) -> GenericityReport:
    """Report listed comparisons that tie; optionally check belief injectivity.

    Full mode enumerates all 2^|states| subset sums per voter, so it is capped
    at `full_bound` states. Violations are data, not exceptions.
    """
    violations: list[tuple] = []
    for item in comparisons:
        kind = item[0]
        if kind == "belief":
            _, voter, e, f = item
            if profile.prefs[voter].belief.prob(e) == profile.prefs[voter].belief.prob(f):
                violations.append(("belief", voter, e, f))
        elif kind == "valuation":
            _, voter, x, y = item
            vals = profile.prefs[voter].valuation.values
            if x != y and vals[x] == vals[y]:
                violations.append(("valuation", voter, x, y))
        else:
            raise SuvoteError(f"unknown comparison kind {kind!r}")
    if full:
        space = profile.prefs[0].belief.space
        if space.size > full_bound:
            raise ResourceBudgetError(
                f"full genericity check over {space.size} states exceeds the bound")
        for voter, pref in enumerate(profile.prefs):
            by_sum: dict[Fraction, int] = {}
            for mask in range(1 << space.size):
                total = pref.belief.prob_mask(mask)
                other = by_sum.get(total)
                if other is not None:
                    violations.append(
                        ("belief", voter, Event(space, other), Event(space, mask)))
                else:
                    by_sum[total] = mask
    return GenericityReport(tuple(violations))


def _sample_valuation(rng: random.Random, outcomes: OutcomeSpace,
                      denom_bound: int) -> Valuation:
    order = list(range(outcomes.size))
    rng.shuffle(order)
    interior: set[Fraction] = set()
    while len(interior) < outcomes.size - 2:
        den = rng.randint(max(3, outcomes.size), denom_bound)
        num = rng.randint(1, den - 1)
        interior.add(Fraction(num, den))
    levels = [Fraction(0)] + sorted(interior) + [Fraction(1)]
    values = [Fraction(0)] * outcomes.size
    for rank, outcome in enumerate(order):
        values[outcome] = levels[rank]
    return Valuation(outcomes, values)


def _sample_belief(rng: random.Random, space: StateSpace, denom_bound: int) -> Belief:
    weights = [rng.randint(1, denom_bound) for _ in space.labels]
    total = sum(weights)
    return Belief(space, [Fraction(w, total) for w in weights])


def gen_profile(n: int, space: StateSpace, outcomes: OutcomeSpace,
                denom_bound: int, seed: int,
                comparisons: Iterable[tuple] = (),
                accept=None, max_resamples: int = 1000) -> Profile:
    """Deterministically sample a generic profile.

    Resamples until the requested comparisons are strict and the optional
    `accept` predicate (e.g. "the mechanism evaluates without a genericity
    error") passes. Raises ResourceBudgetError when the resample budget runs
    out.
    """
    if denom_bound < space.size * outcomes.size:
        raise SuvoteError("denominator bound too small for this space")
    comparisons = list(comparisons)
    rng = random.Random(seed)
    for _ in range(max_resamples):
        prefs = tuple(
            Preference(_sample_valuation(rng, outcomes, denom_bound),
                       _sample_belief(rng, space, denom_bound))
            for _ in range(n)
        )
        profile = Profile(prefs)
        if comparisons and not check_genericity(profile, comparisons).ok:
            continue
        if accept is not None and not accept(profile):
            continue
        return profile
    raise ResourceBudgetError("profile resample budget exhausted")
