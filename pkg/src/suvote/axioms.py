"""Axiom verification harness.

Exact anonymity checks, range-unanimity checks, and a strategy-proofness
search that works in the space of ordinal report signatures: factor outputs
depend on a report only through finitely many comparisons (the supporter
split per cell, pairwise event comparisons at the active level, and the menu
favorite when the reporter is the lone supporter), so a deviator's options
reduce to a finite signature set, each realized constructively with exact
rationals.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .errors import (
    ConfigError,
    Diagnostic,
    GenericityViolation,
    ResourceBudgetError,
    SuvoteError,
)
from .mechanism import (
    Mechanism,
    PairwiseMajority,
    evaluate_mechanism,
    mechanism_range,
)
from .model import (
    Act,
    Belief,
    Event,
    OutcomeSpace,
    Preference,
    Profile,
    StateSpace,
    Valuation,
    expected_utility,
    tau_top,
)

# ---------------------------------------------------------------------------
# witnesses and reports


@dataclass(frozen=True)
class AnonymityWitness:
    profile: Profile
    swap: tuple[int, int]
    act: Act
    permuted_act: Act

    def to_json(self) -> dict:
        return {
            "type": "anonymity",
            "swap": list(self.swap),
            "profile": self.profile.to_json(),
            "act": self.act.to_json(),
            "permuted_act": self.permuted_act.to_json(),
        }


@dataclass(frozen=True)
class RangeUnanimityWitness:
    profile: Profile
    top_act: Act
    chosen_act: Act

    def to_json(self) -> dict:
        return {
            "type": "range-unanimity",
            "profile": self.profile.to_json(),
            "top_act": self.top_act.to_json(),
            "chosen_act": self.chosen_act.to_json(),
        }


@dataclass(frozen=True)
class ManipulationWitness:
    profile: Profile
    deviator: int
    misreport: Preference
    truthful_act: Act
    deviated_act: Act
    truthful_eu: Fraction
    deviated_eu: Fraction

    def to_json(self) -> dict:
        return {
            "type": "manipulation",
            "deviator": self.deviator,
            "profile": self.profile.to_json(),
            "misreport": self.misreport.to_json(),
            "truthful_act": self.truthful_act.to_json(),
            "deviated_act": self.deviated_act.to_json(),
            "truthful_eu": f"{self.truthful_eu.numerator}/{self.truthful_eu.denominator}",
            "deviated_eu": f"{self.deviated_eu.numerator}/{self.deviated_eu.denominator}",
        }

    @classmethod
    def from_json(cls, data: dict) -> "ManipulationWitness":
        profile = Profile.from_json(data["profile"])
        space = profile.prefs[0].belief.space
        outcomes = profile.prefs[0].valuation.outcomes
        mis = data["misreport"]
        misreport = Preference(Valuation.from_json(outcomes, mis["valuation"]),
                               Belief.from_json(space, mis["belief"]))
        return cls(
            profile=profile,
            deviator=data["deviator"],
            misreport=misreport,
            truthful_act=Act.from_labels(space, outcomes, data["truthful_act"]),
            deviated_act=Act.from_labels(space, outcomes, data["deviated_act"]),
            truthful_eu=Fraction(data["truthful_eu"]),
            deviated_eu=Fraction(data["deviated_eu"]),
        )


def replay_manipulation(mech, witness: ManipulationWitness) -> bool:
    """Re-verify a manipulation witness from its data alone."""
    truthful = mech.evaluate(witness.profile)
    deviated = mech.evaluate(
        witness.profile.replace(witness.deviator, witness.misreport))
    true_pref = witness.profile.prefs[witness.deviator]
    eu_t = expected_utility(truthful, true_pref)
    eu_d = expected_utility(deviated, true_pref)
    return (truthful == witness.truthful_act
            and deviated == witness.deviated_act
            and eu_t == witness.truthful_eu
            and eu_d == witness.deviated_eu
            and eu_d > eu_t)


@dataclass
class CheckOutcome:
    verdict: str  # "pass" | "fail" | "exhausted-budget"
    witness: object = None
    work_units: int = 0

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "work_units": self.work_units}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


@dataclass
class VerificationReport:
    mode: str
    seed: int
    anonymity: CheckOutcome
    range_unanimity: CheckOutcome
    strategy_proofness: CheckOutcome
    profile_counts: dict[str, int] = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(c.verdict == "pass" for c in
                   (self.anonymity, self.range_unanimity, self.strategy_proofness))

    @property
    def exhausted(self) -> bool:
        return any(c.verdict == "exhausted-budget" for c in
                   (self.anonymity, self.range_unanimity, self.strategy_proofness))

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "seed": self.seed,
            "profile_counts": self.profile_counts,
            "anonymity": self.anonymity.to_json(),
            "range_unanimity": self.range_unanimity.to_json(),
            "strategy_proofness": self.strategy_proofness.to_json(),
        }


# ---------------------------------------------------------------------------
# anonymity


def check_anonymity(mech, profiles: Iterable[Profile]) -> CheckOutcome:
    """Assert invariance under every voter transposition, profile by profile.

    Transpositions generate the full symmetric group and act equality
    composes, so transposition invariance implies invariance under every
    permutation.
    """
    work = 0
    for profile in profiles:
        base = mech.evaluate(profile)
        for i in range(profile.n):
            for j in range(i + 1, profile.n):
                work += 1
                swapped = mech.evaluate(profile.transpose(i, j))
                if swapped != base:
                    return CheckOutcome("fail", AnonymityWitness(
                        profile, (i, j), base, swapped), work)
    return CheckOutcome("pass", None, work)


# ---------------------------------------------------------------------------
# range-unanimity


def _jittered_shared_valuations(outcomes: OutcomeSpace, order: Sequence[int],
                                n: int, salt: int) -> list[Valuation]:
    """Injective normalized valuations, one per voter, all ranking outcomes
    by `order` (first = worst). Middle ranks get distinct per-voter jitter."""
    size = outcomes.size
    vals = []
    for voter in range(n):
        values = [Fraction(0)] * size
        for rank, outcome in enumerate(order):
            if rank == 0:
                values[outcome] = Fraction(0)
            elif rank == size - 1:
                values[outcome] = Fraction(1)
            else:
                base = Fraction(rank, size - 1)
                jitter = Fraction(1, 1000 + 7 * voter + 13 * salt + rank)
                values[outcome] = base - jitter
        vals.append(Valuation(outcomes, values))
    return vals


def _near_uniform_beliefs(space: StateSpace, n: int, salt: int) -> list[Belief]:
    """Per-voter beliefs close to uniform, pairwise-state gaps kept tiny."""
    beliefs = []
    for voter in range(n):
        weights = [1000 + (voter + 1) * (s + 1) + salt * (s * s + 1)
                   for s in range(space.size)]
        total = sum(weights)
        beliefs.append(Belief(space, [Fraction(w, total) for w in weights]))
    return beliefs


def _range_top_act(mech, profile: Profile):
    """The act every voter ranks top within the per-state ranges, or None."""
    ranges = mech.ranges()
    assignment = []
    for s in range(mech.space.size):
        pool = ranges[s]
        tops = {tau_top(p.valuation, pool) for p in profile.prefs}
        if len(tops) > 1:
            return None
        assignment.append(tops.pop())
    return Act(mech.space, mech.outcomes, tuple(assignment))


def check_range_unanimity(mech, trials: int, seed: int,
                          extra_profiles: Iterable[Profile] = ()) -> CheckOutcome:
    """Constructed unanimous profiles (shared outcome order, near-uniform and
    randomized beliefs) must make the mechanism select the range-top act;
    sampled profiles are checked whenever they happen to admit one."""
    rng = random.Random(seed)
    outcomes = list(range(mech.outcomes.size))
    orders = [tuple(outcomes), tuple(reversed(outcomes))][:trials]
    for _ in range(max(0, trials - 2)):
        order = outcomes[:]
        rng.shuffle(order)
        orders.append(tuple(order))
    work = 0
    for salt, order in enumerate(orders):
        valuations = _jittered_shared_valuations(mech.outcomes, order, mech.n, salt)
        if salt % 2 == 0:
            beliefs = _near_uniform_beliefs(mech.space, mech.n, salt)
        else:
            beliefs = []
            for _ in range(mech.n):
                weights = [rng.randint(1, 997) for _ in range(mech.space.size)]
                beliefs.append(Belief(
                    mech.space, [Fraction(w, sum(weights)) for w in weights]))
        profile = Profile(tuple(Preference(v, b) for v, b in zip(valuations, beliefs)))
        work += 1
        top = _range_top_act(mech, profile)
        if top is None:
            continue
        try:
            chosen = mech.evaluate(profile)
        except GenericityViolation:
            continue
        if chosen != top:
            return CheckOutcome("fail",
                                RangeUnanimityWitness(profile, top, chosen), work)
    for profile in extra_profiles:
        work += 1
        top = _range_top_act(mech, profile)
        if top is None:
            continue
        chosen = mech.evaluate(profile)
        if chosen != top:
            return CheckOutcome("fail",
                                RangeUnanimityWitness(profile, top, chosen), work)
    return CheckOutcome("pass", None, work)


# ---------------------------------------------------------------------------
# report signatures: enumeration and realization


def _realizable_sign_vectors(outcomes: OutcomeSpace,
                             pairs: tuple[tuple[int, int], ...]):
    """Distinct vectors of a-vs-b choices over the cells' outcome pairs,
    each with a representative injective normalized valuation."""
    seen: dict[tuple[bool, ...], Valuation] = {}
    size = outcomes.size
    for perm in itertools.permutations(range(size)):
        bits = tuple(perm.index(a) > perm.index(b) for a, b in pairs)
        if bits not in seen:
            values = [Fraction(0)] * size
            for rank, outcome in enumerate(perm):
                values[outcome] = Fraction(rank, size - 1)
            seen[bits] = Valuation(outcomes, values)
    return list(seen.items())


def _weighted_cell_masses(cell: Event, directions, menu_pick: Event | None) -> list[int]:
    """Integer weights over the cell's states realizing the requested
    comparisons: for each (heavy, light) event pair the heavy side outweighs
    the light one; a menu pick is loaded uniformly enough to top every
    non-nested alternative."""
    states = list(cell.indices())
    pos = {s: idx for idx, s in enumerate(states)}
    weights = [1] * len(states)
    if menu_pick is not None:
        for s in states:
            weights[pos[s]] = 1
        for s in menu_pick.indices():
            weights[pos[s]] = 4 * len(states)
    for heavy, light in directions:
        light_total = len(list(light.indices()))
        for s in heavy.indices():
            weights[pos[s]] = light_total + 1
        for s in light.indices():
            weights[pos[s]] = 1
    return weights


@dataclass(frozen=True)
class _CellPlan:
    """What the deviator can steer inside one cell, given the others' reports."""

    index: int
    pair: tuple[int, int] | None  # outcome pair of a binary cell
    others_n_a: int
    comparison_options: tuple  # tuple of (heavy, light) alternatives per slot
    menu_options: tuple  # Events the deviator could name as favorite, or ()


class DeviationContext:
    """Aggregates one profile's reports so counterfactual reports of a single
    voter can be evaluated by count adjustments instead of full re-evaluation."""

    def __init__(self, mech: Mechanism, profile: Profile):
        self.mech = mech
        self.profile = profile
        self.signs: list[list[bool]] = []  # [cell][voter] True if a-supporter
        self.bits: list[dict] = []  # [cell][(e_mask, f_mask)][voter] -> bool
        self.menu_tops: list[list[int | None]] = []
        for cell in mech.cells:
            factor = cell.factor
            cell_signs = []
            cell_bits: dict = {}
            menu_top: list[int | None] = [None] * profile.n
            if factor.kind != "constant":
                for p in profile.prefs:
                    cell_signs.append(p.valuation.prefers(factor.a, factor.b))
                for e, f in self._comparisons(factor):
                    per_voter = []
                    for i, p in enumerate(profile.prefs):
                        pe, pf = p.belief.prob(e), p.belief.prob(f)
                        if pe == pf:
                            raise GenericityViolation(
                                f"voter {i} ties {e} against {f}", voter=i,
                                detail=(e, f))
                        per_voter.append(pe > pf)
                    cell_bits[(e.mask, f.mask)] = per_voter
                if factor.kind == "quasidict":
                    for i, p in enumerate(profile.prefs):
                        probs = [p.belief.prob(ev) for ev in factor.menu]
                        best = max(probs)
                        tops = [idx for idx, pr in enumerate(probs) if pr == best]
                        if len(tops) > 1:
                            raise GenericityViolation(
                                f"voter {i} ties menu events", voter=i)
                        menu_top[i] = tops[0]
            self.signs.append(cell_signs)
            self.bits.append(cell_bits)
            self.menu_tops.append(menu_top)

    @staticmethod
    def _comparisons(factor) -> list[tuple[Event, Event]]:
        if factor.kind == "dyadic":
            return [(factor.e, factor.f)]
        if factor.kind == "filtering":
            out = []
            flt = factor.filter
            for k in range(flt.k_lo, flt.k_hi + 1):
                out.extend(flt.level(k).pairs)
            return out
        return []

    def genericity_comparisons(self) -> list[tuple]:
        """All (voter, event, event) comparisons this mechanism can evaluate."""
        out = []
        for cell in self.mech.cells:
            for e, f in self._comparisons(cell.factor):
                for i in range(self.profile.n):
                    out.append(("belief", i, e, f))
        return out

    def truthful_act(self) -> Act:
        return self.act_with(None, None, None, None)

    def act_with(self, deviator, sign_bits, dir_bits, menu_picks) -> Act:
        """Act under a counterfactual report of `deviator`.

        sign_bits: per-cell a-support of the deviator; dir_bits: per-cell dict
        (e_mask, f_mask) -> deviator's p(E) > p(F); menu_picks: per-cell menu
        index. Pass None everywhere for the truthful act.
        """
        mech = self.mech
        assignment = [0] * mech.space.size
        for c, cell in enumerate(mech.cells):
            factor = cell.factor
            states = list(cell.event.indices())
            if factor.kind == "constant":
                for s in states:
                    assignment[s] = factor.c
                continue
            signs = self.signs[c]

            def voter_sign(i: int) -> bool:
                if deviator is not None and i == deviator:
                    return sign_bits[c]
                return signs[i]

            def voter_bit(key: tuple[int, int], i: int) -> bool:
                if deviator is not None and i == deviator:
                    return dir_bits[c][key]
                return self.bits[c][key][i]

            n_a = sum(voter_sign(i) for i in range(self.profile.n))
            a_mask = self._cell_a_mask(c, factor, n_a, voter_sign, voter_bit,
                                       deviator, menu_picks)
            for s in states:
                assignment[s] = factor.a if a_mask >> s & 1 else factor.b
        return Act(mech.space, mech.outcomes, tuple(assignment))

    def _cell_a_mask(self, c, factor, n_a, voter_sign, voter_bit,
                     deviator, menu_picks) -> int:
        """Parent-space mask of states receiving outcome a in this cell."""
        n = self.profile.n
        cell_mask = factor.cell.mask
        if factor.kind == "simple":
            return cell_mask if n_a >= factor.k_bar else 0
        if factor.kind == "quasidict":
            if n_a == 0:
                return 0
            if n_a >= 2:
                return cell_mask
            lone = next(i for i in range(n) if voter_sign(i))
            if deviator is not None and lone == deviator:
                pick = menu_picks[c]
                if pick is None:
                    raise SuvoteError("deviator's menu favorite is unspecified")
                return factor.menu[pick].mask
            top = self.menu_tops[c][lone]
            return factor.menu[top].mask
        if factor.kind == "dyadic":
            if n_a <= factor.k_lo - 1:
                return 0
            if n_a >= factor.k_hi + 1:
                return cell_mask
            key = (factor.e.mask, factor.f.mask)
            m_a = sum(1 for i in range(n) if voter_sign(i) and voter_bit(key, i))
            m_b = sum(1 for i in range(n) if not voter_sign(i) and not voter_bit(key, i))
            return factor.e.mask if factor.h.value(m_a, m_b) == 1 else factor.f.mask
        if factor.kind == "filtering":
            flt = factor.filter
            if n_a <= flt.k_lo - 1:
                return 0
            if n_a >= flt.k_hi + 1:
                return cell_mask
            level = flt.level(n_a)
            z = level.g_a.mask
            for m, (e, f) in enumerate(level.pairs, start=1):
                t_tilde, t_hat = factor.quotas.quotas(n_a, m)
                key = (e.mask, f.mask)
                eta_a = sum(1 for i in range(n)
                            if voter_sign(i) and not voter_bit(key, i))
                eta_b = sum(1 for i in range(n)
                            if not voter_sign(i) and voter_bit(key, i))
                z |= f.mask if (eta_a >= t_tilde or eta_b >= t_hat) else e.mask
            return z
        raise SuvoteError(f"unknown factor kind {factor.kind!r}")

    # -- deviation enumeration ------------------------------------------------

    def deviation_signatures(self, deviator: int) -> Iterator[tuple]:
        """All ordinal report signatures available to one voter.

        Yields (sign_bits, dir_bits, menu_picks, representative_valuation);
        the caller realizes a belief only when it needs a concrete report.
        """
        mech = self.mech
        pairs = []
        for cell in mech.cells:
            if cell.factor.kind != "constant":
                pairs.append((cell.factor.a, cell.factor.b))
        sign_vectors = _realizable_sign_vectors(mech.outcomes, tuple(pairs))
        for bits, valuation in sign_vectors:
            sign_bits: list[bool | None] = []
            slot = 0
            for cell in mech.cells:
                if cell.factor.kind == "constant":
                    sign_bits.append(None)
                else:
                    sign_bits.append(bits[slot])
                    slot += 1
            per_cell_options: list[list] = []
            for c, cell in enumerate(mech.cells):
                factor = cell.factor
                options: list[tuple[dict, int | None]] = [({}, None)]
                if factor.kind == "constant" or factor.kind == "simple":
                    per_cell_options.append(options)
                    continue
                others_a = sum(1 for i in range(self.profile.n)
                               if i != deviator and self.signs[c][i])
                n_a = others_a + (1 if sign_bits[c] else 0)
                if factor.kind == "dyadic":
                    if factor.k_lo <= n_a <= factor.k_hi:
                        key = (factor.e.mask, factor.f.mask)
                        options = [({key: True}, None), ({key: False}, None)]
                elif factor.kind == "filtering":
                    flt = factor.filter
                    if flt.k_lo <= n_a <= flt.k_hi:
                        keys = [(e.mask, f.mask) for e, f in flt.level(n_a).pairs]
                        options = [
                            (dict(zip(keys, combo)), None)
                            for combo in itertools.product((True, False),
                                                           repeat=len(keys))
                        ]
                elif factor.kind == "quasidict":
                    if sign_bits[c] and others_a == 0:
                        options = [({}, pick) for pick in range(len(factor.menu))]
                per_cell_options.append(options)
            for combo in itertools.product(*per_cell_options):
                dir_bits = [opt[0] for opt in combo]
                menu_picks = [opt[1] for opt in combo]
                yield sign_bits, dir_bits, menu_picks, valuation

    def realize_report(self, sign_bits, dir_bits, menu_picks,
                       valuation: Valuation) -> Preference:
        """Concrete preference inducing the given signature."""
        mech = self.mech
        weights = [0] * mech.space.size
        for c, cell in enumerate(mech.cells):
            factor = cell.factor
            directions = []
            for (e_mask, f_mask), e_heavier in dir_bits[c].items():
                e = Event(mech.space, e_mask)
                f = Event(mech.space, f_mask)
                directions.append((e, f) if e_heavier else (f, e))
            pick = None
            if menu_picks[c] is not None:
                pick = factor.menu[menu_picks[c]]
            cell_weights = _weighted_cell_masses(cell.event, directions, pick)
            for w, s in zip(cell_weights, cell.event.indices()):
                weights[s] = w
        total = sum(weights)
        belief = Belief(mech.space, [Fraction(w, total) for w in weights])
        return Preference(valuation, belief)


@dataclass
class AchievableActs:
    """Deviation options of one voter: act -> a realizing report."""

    acts: dict[Act, Preference]
    unresolved: list[tuple]

    def act_set(self) -> set[Act]:
        return set(self.acts)


def achievable_acts(mech: Mechanism, profile: Profile, deviator: int) -> AchievableActs:
    """Enumerate the deviator's ordinal report signatures against the fixed
    others, realize each constructively, and collect the resulting acts."""
    ctx = DeviationContext(mech, profile)
    acts: dict[Act, Preference] = {}
    unresolved: list[tuple] = []
    for sign_bits, dir_bits, menu_picks, valuation in ctx.deviation_signatures(deviator):
        try:
            act = ctx.act_with(deviator, sign_bits, dir_bits, menu_picks)
        except GenericityViolation:
            unresolved.append((sign_bits, dir_bits, menu_picks))
            continue
        if act not in acts:
            report = ctx.realize_report(sign_bits, dir_bits, menu_picks, valuation)
            acts[act] = report
    return AchievableActs(acts, unresolved)


# ---------------------------------------------------------------------------
# manipulation search


@dataclass
class SearchResult:
    verdict: str  # "none" | "witness" | "exhausted-budget"
    witness: ManipulationWitness | None
    work_units: int
    mode: str

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "work_units": self.work_units,
               "mode": self.mode}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def _witness_from(mech, profile: Profile, deviator: int, report: Preference,
                  truthful_act: Act, deviated_act: Act) -> ManipulationWitness:
    true_pref = profile.prefs[deviator]
    witness = ManipulationWitness(
        profile=profile,
        deviator=deviator,
        misreport=report,
        truthful_act=truthful_act,
        deviated_act=deviated_act,
        truthful_eu=expected_utility(truthful_act, true_pref),
        deviated_eu=expected_utility(deviated_act, true_pref),
    )
    if not replay_manipulation(mech, witness):
        raise SuvoteError("internal: witness failed to replay")
    return witness


def search_manipulation(mech, profiles: Iterable[Profile] = (), *,
                        mode: str = "sampled", budget: int | None = None,
                        seed: int | None = None, jobs: int = 1) -> SearchResult:
    """Hunt for a profitable unilateral misreport.

    Sampled mode walks the given profiles, enumerating each voter's full
    deviation signature space against the fixed others. Exhaustive mode
    additionally enumerates the non-deviators' ordinal types (single-cell
    binary mechanisms over at most three states), so a "none" verdict covers
    the whole ordinal space. Budget exhaustion is reported as its own
    verdict, never as a pass. `jobs` > 1 fans the sampled scan over worker
    processes; the merge is deterministic, so results do not depend on it.
    """
    if budget is None:
        raise ConfigError("search budget is mandatory")
    if seed is None:
        raise ConfigError("search seed is mandatory")
    if mode == "exhaustive":
        return _search_exhaustive(mech, budget)
    if mode != "sampled":
        raise ConfigError(f"unknown search mode {mode!r}")
    if not isinstance(mech, Mechanism):
        return _search_sampled_raw(mech, profiles, budget, seed)
    if jobs > 1:
        profiles = list(profiles)
        try:
            return _search_sampled_parallel(mech, profiles, budget, jobs)
        except (OSError, ValueError, ImportError):
            pass  # no usable worker pool: fall through to the serial scan

    work = 0
    for profile in profiles:
        ctx = DeviationContext(mech, profile)
        truthful = ctx.truthful_act()
        eus = [expected_utility(truthful, p) for p in profile.prefs]
        for voter in range(profile.n):
            if work >= budget:
                return SearchResult("exhausted-budget", None, work, mode)
            work += 1
            true_pref = profile.prefs[voter]
            for sign_bits, dir_bits, menu_picks, valuation in \
                    ctx.deviation_signatures(voter):
                try:
                    act = ctx.act_with(voter, sign_bits, dir_bits, menu_picks)
                except GenericityViolation:
                    continue
                if act == truthful:
                    continue
                if expected_utility(act, true_pref) > eus[voter]:
                    report = ctx.realize_report(sign_bits, dir_bits, menu_picks,
                                                valuation)
                    deviated = mech.evaluate(profile.replace(voter, report))
                    if deviated != act:
                        # realization failed to reproduce the signature act
                        raise SuvoteError("internal: realized report diverges")
                    witness = _witness_from(mech, profile, voter, report,
                                            truthful, act)
                    return SearchResult("witness", witness, work, mode)
    return SearchResult("none", None, work, mode)


def _scan_profile_tasks(mech: Mechanism, indexed_profiles, task_cap: int):
    """Scan (profile, voter) tasks; return (task_index, witness) for the first
    profitable deviation, or (tasks_done, None). Used by the parallel path."""
    done = 0
    for base_index, profile in indexed_profiles:
        ctx = DeviationContext(mech, profile)
        truthful = ctx.truthful_act()
        eus = [expected_utility(truthful, p) for p in profile.prefs]
        for voter in range(profile.n):
            task_index = base_index + voter
            if task_index >= task_cap:
                return done, None
            done += 1
            true_pref = profile.prefs[voter]
            for sign_bits, dir_bits, menu_picks, valuation in \
                    ctx.deviation_signatures(voter):
                try:
                    act = ctx.act_with(voter, sign_bits, dir_bits, menu_picks)
                except GenericityViolation:
                    continue
                if act == truthful:
                    continue
                if expected_utility(act, true_pref) > eus[voter]:
                    report = ctx.realize_report(sign_bits, dir_bits, menu_picks,
                                                valuation)
                    witness = _witness_from(mech, profile, voter, report,
                                            truthful, act)
                    return task_index, witness
    return done, None


def _search_sampled_parallel(mech: Mechanism, profiles: list[Profile],
                             budget: int, jobs: int) -> SearchResult:
    import concurrent.futures

    n = mech.n if profiles == [] else profiles[0].n
    indexed = [(i * n, p) for i, p in enumerate(profiles)]
    chunks = [indexed[c::jobs] for c in range(jobs)]
    total_tasks = len(profiles) * n
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_scan_profile_tasks,
                                [mech] * jobs, chunks, [budget] * jobs))
    hits = [(idx, w) for idx, w in results if w is not None]
    if hits:
        idx, witness = min(hits, key=lambda pair: pair[0])
        return SearchResult("witness", witness, idx + 1, "sampled")
    if total_tasks > budget:
        return SearchResult("exhausted-budget", None, budget, "sampled")
    return SearchResult("none", None, total_tasks, "sampled")


def _search_sampled_raw(mech, profiles: Iterable[Profile], budget: int,
                        seed: int, reports_per_task: int = 12) -> SearchResult:
    """Deviation sampling for rules without a factor structure: random
    misreports plus copies of the other voters' reports."""
    from .model import gen_profile

    work = 0
    for p_idx, profile in enumerate(profiles):
        truthful = mech.evaluate(profile)
        for voter in range(profile.n):
            if work >= budget:
                return SearchResult("exhausted-budget", None, work, "sampled")
            work += 1
            true_pref = profile.prefs[voter]
            eu_true = expected_utility(truthful, true_pref)
            candidates: list[Preference] = [
                profile.prefs[j] for j in range(profile.n) if j != voter]
            filler = gen_profile(
                max(2, reports_per_task), mech.space, mech.outcomes, 1000,
                seed + 7919 * p_idx + voter)
            candidates.extend(filler.prefs)
            for report in candidates[:reports_per_task]:
                try:
                    deviated = mech.evaluate(profile.replace(voter, report))
                except GenericityViolation:
                    continue
                if deviated == truthful:
                    continue
                eu_dev = expected_utility(deviated, true_pref)
                if eu_dev > eu_true:
                    witness = _witness_from(mech, profile, voter, report,
                                            truthful, deviated)
                    return SearchResult("witness", witness, work, "sampled")
    return SearchResult("none", None, work, "sampled")


# ---------------------------------------------------------------------------
# exhaustive search over ordinal types (single-cell, small state spaces)


_TYPE_SEEDS = {
    1: [(1,)],
    2: [(2, 1), (1, 2)],
    3: [p for p in itertools.permutations((6, 3, 1))]
       + [p for p in itertools.permutations((5, 4, 3))],
}


def belief_order_types(space: StateSpace) -> list[Belief]:
    """Representative beliefs realizing every ordinal type of subset sums.

    On up to three states the listed seeds hit every realizable strict order
    of event probabilities exactly once (verified by enumeration in tests).
    """
    if space.size not in _TYPE_SEEDS:
        raise ResourceBudgetError(
            "exhaustive ordinal enumeration supports at most 3 states")
    reps = []
    seen: set[tuple] = set()
    for weights in _TYPE_SEEDS[space.size]:
        total = sum(weights)
        belief = Belief(space, [Fraction(w, total) for w in weights])
        signature = tuple(sorted(range(1 << space.size),
                                 key=lambda m: belief.prob_mask(m)))
        if signature in seen:
            raise SuvoteError("internal: duplicate ordinal type seed")
        seen.add(signature)
        reps.append(belief)
    return reps


@dataclass(frozen=True)
class _VoterType:
    sign: bool  # supports a over b
    belief: Belief
    valuation: Valuation
    rank: tuple[int, ...]  # rank[mask] orders all event masses

    def prefers_mask(self, first: int, second: int) -> bool:
        return self.rank[first] > self.rank[second]


def _voter_types(mech: Mechanism) -> list[_VoterType]:
    factor = mech.cells[0].factor
    a, b = factor.a, factor.b
    size = mech.outcomes.size
    types = []
    for sign in (True, False):
        hi, lo = (a, b) if sign else (b, a)
        values = [Fraction(0)] * size
        values[hi], values[lo] = Fraction(1), Fraction(0)
        rest = [x for x in range(size) if x not in (hi, lo)]
        for j, x in enumerate(rest):
            values[x] = Fraction(2 * j + 1, 4 * size)
        valuation = Valuation(mech.outcomes, values)
        for belief in belief_order_types(mech.space):
            probs = sorted(range(1 << mech.space.size), key=belief.prob_mask)
            rank = [0] * (1 << mech.space.size)
            for r, m in enumerate(probs):
                rank[m] = r
            types.append(_VoterType(sign, belief, valuation, tuple(rank)))
    return types


def _exhaustive_act_mask(factor, joint: Sequence[_VoterType]) -> int:
    n_a = sum(1 for t in joint if t.sign)
    cell_mask = factor.cell.mask
    if factor.kind == "simple":
        return cell_mask if n_a >= factor.k_bar else 0
    if factor.kind == "quasidict":
        if n_a == 0:
            return 0
        if n_a >= 2:
            return cell_mask
        lone = next(t for t in joint if t.sign)
        return max(factor.menu, key=lambda ev: lone.rank[ev.mask]).mask
    if factor.kind == "dyadic":
        if n_a <= factor.k_lo - 1:
            return 0
        if n_a >= factor.k_hi + 1:
            return cell_mask
        e, f = factor.e.mask, factor.f.mask
        m_a = sum(1 for t in joint if t.sign and t.prefers_mask(e, f))
        m_b = sum(1 for t in joint if not t.sign and t.prefers_mask(f, e))
        return e if factor.h.value(m_a, m_b) == 1 else f
    if factor.kind == "filtering":
        flt = factor.filter
        if n_a <= flt.k_lo - 1:
            return 0
        if n_a >= flt.k_hi + 1:
            return cell_mask
        level = flt.level(n_a)
        z = level.g_a.mask
        for m, (e, f) in enumerate(level.pairs, start=1):
            t_tilde, t_hat = factor.quotas.quotas(n_a, m)
            eta_a = sum(1 for t in joint if t.sign and t.prefers_mask(f.mask, e.mask))
            eta_b = sum(1 for t in joint
                        if not t.sign and t.prefers_mask(e.mask, f.mask))
            z |= f.mask if (eta_a >= t_tilde or eta_b >= t_hat) else e.mask
        return z
    raise SuvoteError(f"unsupported factor kind {factor.kind!r} for exhaustive mode")


def _search_exhaustive(mech, budget: int) -> SearchResult:
    if not isinstance(mech, Mechanism) or len(mech.cells) != 1 \
            or mech.cells[0].factor.kind == "constant":
        raise ResourceBudgetError(
            "exhaustive mode covers single-cell binary mechanisms only")
    factor = mech.cells[0].factor
    types = _voter_types(mech)
    anonymous = mech.anonymous_by_construction
    if anonymous:
        joints = itertools.combinations_with_replacement(range(len(types)), mech.n)
    else:
        joints = itertools.product(range(len(types)), repeat=mech.n)
    work = 0
    for joint_idx in joints:
        if work >= budget:
            return SearchResult("exhausted-budget", None, work, "exhaustive")
        work += 1
        joint = [types[i] for i in joint_idx]
        truthful_mask = _exhaustive_act_mask(factor, joint)
        for pos in range(mech.n):
            if anonymous and pos > 0 and joint_idx[pos] == joint_idx[pos - 1]:
                continue  # same type as previous position: same deviations
            true_type = joint[pos]
            for dev_idx, dev_type in enumerate(types):
                if dev_idx == joint_idx[pos]:
                    continue
                deviated = joint[:pos] + [dev_type] + joint[pos + 1:]
                dev_mask = _exhaustive_act_mask(factor, deviated)
                if dev_mask == truthful_mask:
                    continue
                profitable = (true_type.rank[dev_mask] > true_type.rank[truthful_mask]
                              if true_type.sign else
                              true_type.rank[dev_mask] < true_type.rank[truthful_mask])
                if profitable:
                    profile = Profile(tuple(
                        Preference(t.valuation, t.belief) for t in joint))
                    report = Preference(dev_type.valuation, dev_type.belief)
                    truthful_act = evaluate_mechanism(mech, profile)
                    if truthful_act.event_where(factor.a).mask != truthful_mask:
                        raise SuvoteError("internal: engine/evaluator mismatch")
                    deviated_act = evaluate_mechanism(
                        mech, profile.replace(pos, report))
                    witness = _witness_from(mech, profile, pos, report,
                                            truthful_act, deviated_act)
                    return SearchResult("witness", witness, work, "exhaustive")
    return SearchResult("none", None, work, "exhaustive")


# ---------------------------------------------------------------------------
# aggregate verification


@dataclass
class VerifyConfig:
    """Budgets and seeds are mandatory; there is no infinite default."""

    seed: int
    anonymity_profiles: int
    unanimity_trials: int
    manipulation_profiles: int
    manipulation_budget: int
    mode: str = "sampled"
    denominator_bound: int = 1000

    def __post_init__(self):
        for name in ("seed", "anonymity_profiles", "unanimity_trials",
                     "manipulation_profiles", "manipulation_budget"):
            if getattr(self, name) is None:
                raise ConfigError(f"verify config field {name} is mandatory")


def signature_accept(mech) -> Callable[[Profile], bool]:
    """Profile filter: every comparison the search may evaluate is strict."""

    def accept(profile: Profile) -> bool:
        try:
            if isinstance(mech, Mechanism):
                ctx = DeviationContext(mech, profile)
                ctx.truthful_act()
            else:
                mech.evaluate(profile)
        except GenericityViolation:
            return False
        return True

    return accept


def verify(mech, config: VerifyConfig,
           profile_source: Callable[[int, int], Profile] | None = None) -> VerificationReport:
    """Run all three axiom checks with configured budgets and seeds."""
    from .model import gen_profile

    def default_source(seed: int, count: int):
        accept = signature_accept(mech)
        profiles = []
        for idx in range(count):
            profiles.append(gen_profile(
                mech.n, mech.space, mech.outcomes, config.denominator_bound,
                seed + idx, accept=accept))
        return profiles

    source = profile_source or default_source
    anon_profiles = source(config.seed, config.anonymity_profiles)
    anonymity = check_anonymity(mech, anon_profiles)
    unanimity = check_range_unanimity(mech, config.unanimity_trials,
                                      config.seed + 10_000)
    if config.mode == "exhaustive":
        sp = _search_exhaustive(mech, config.manipulation_budget)
    else:
        sp_profiles = source(config.seed + 20_000, config.manipulation_profiles)
        sp = search_manipulation(mech, sp_profiles, mode="sampled",
                                 budget=config.manipulation_budget,
                                 seed=config.seed)
    outcome_sp = CheckOutcome(
        "pass" if sp.verdict == "none" else
        ("fail" if sp.verdict == "witness" else "exhausted-budget"),
        sp.witness, sp.work_units)
    return VerificationReport(
        mode=config.mode,
        seed=config.seed,
        anonymity=anonymity,
        range_unanimity=unanimity,
        strategy_proofness=outcome_sp,
        profile_counts={
            "anonymity": config.anonymity_profiles,
            "range_unanimity": config.unanimity_trials,
            "strategy_proofness": config.manipulation_profiles,
        },
    )
