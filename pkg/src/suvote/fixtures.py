"""Compiled-in demonstration mechanisms.

The group-activity mechanisms, the three small filtering factors, the
seven-state filter trio used for filter classification, and the
simple-majority rule used as the range-unanimity counterexample. Everything
is built in code so demos run without touching the filesystem.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import SuvoteError
from .events import Dipartition, FilterSeq
from .factors import (
    ConstantFactor,
    DyadicFactor,
    FilteringFactor,
    HTable,
    QuasiDictFactor,
    QuotaTable,
    SimpleFactor,
)
from .mechanism import Cell, FeasibilityMap, Mechanism, PairwiseMajority
from .model import (
    Act,
    Belief,
    OutcomeSpace,
    Preference,
    Profile,
    StateSpace,
    Valuation,
)

REUNION_STATES = StateSpace(("c", "r", "o", "s", "w"))
REUNION_OUTCOMES = OutcomeSpace(("B", "D", "M", "P", "V"))

_REUNION_FEASIBLE = {
    "c": ("B", "M", "P", "V"),
    "r": ("M", "V"),
    "o": ("M", "V"),
    "s": ("B", "D", "M", "P", "V"),
    "w": ("M", "V"),
}


def reunion_phi() -> Mechanism:
    """Two cells: a dyadic beach-vs-park vote on {c,s} (six favorable votes
    flip the middle band) and a quasi-dictatorial movies-vs-volleyball menu
    on {r,o,w}."""
    space, outs = REUNION_STATES, REUNION_OUTCOMES
    feas = FeasibilityMap.from_labels(space, outs, _REUNION_FEASIBLE)
    dyadic = DyadicFactor(
        cell=space.event(("c", "s")),
        a=outs.index("B"), b=outs.index("P"),
        e=space.event(("c",)), f=space.event(("s",)),
        k_lo=4, k_hi=6, h=HTable(threshold=6))
    quasidict = QuasiDictFactor(
        cell=space.event(("r", "o", "w")),
        a=outs.index("M"), b=outs.index("V"),
        menu=(space.event(("r",)), space.event(("o",)), space.event(("w",))))
    return Mechanism(space, outs, feas, 10,
                     (Cell("C1", dyadic), Cell("C2", quasidict)))


def reunion_phi_prime() -> Mechanism:
    """Three cells: constant skydiving on {s}, a simple beach-vs-skydiving
    quota on {c}, and an iso-filtering movies-vs-volleyball factor on {r,o,w}.

    The cloudy-day cell votes between B and D, so this variant's feasibility
    table lists D as available under cloudy skies (unlike `reunion_phi`)."""
    space, outs = REUNION_STATES, REUNION_OUTCOMES
    feasible = dict(_REUNION_FEASIBLE)
    feasible["c"] = ("B", "D", "M", "P", "V")
    feas = FeasibilityMap.from_labels(space, outs, feasible)
    constant = ConstantFactor(space.event(("s",)), outs.index("D"))
    simple = SimpleFactor(space.event(("c",)),
                          a=outs.index("B"), b=outs.index("D"), k_bar=4)
    cell = space.event(("r", "o", "w"))
    level4 = Dipartition(cell,
                         ((space.event(("r",)), space.event(("o",))),),
                         (space.event(()), space.event(("w",))))
    level5 = Dipartition(cell,
                         ((space.event(("w",)), space.event(("r",))),),
                         (space.event(("o",)), space.event(())))
    filt = FilterSeq(cell, 4, 5, (level4, level5))
    quotas = QuotaTable(4, 5, (((5, 1),), ((1, 6),)))
    filtering = FilteringFactor(cell, a=outs.index("M"), b=outs.index("V"),
                                filter=filt, quotas=quotas)
    return Mechanism(space, outs, feas, 10,
                     (Cell("C1", simple), Cell("C2", filtering),
                      Cell("C3", constant)))


# ---------------------------------------------------------------------------
# small filtering factors on three states


def _binary_spaces(n_states: int) -> tuple[StateSpace, OutcomeSpace]:
    return (StateSpace(tuple(f"w{i}" for i in range(1, n_states + 1))),
            OutcomeSpace(("a", "b")))


def three_state_filter(space: StateSpace, rotation: int = 0) -> FilterSeq:
    """The two-level filter on three states: level 1 votes on (w2, w1) with
    w3 fixed to the second outcome, level 2 votes on (w3, w2) with w1 fixed
    to the first. `rotation` relabels the states cyclically."""
    labels = space.labels

    def st(i: int):  # 1-based logical index before rotation
        return space.event((labels[(i - 1 + rotation) % 3],))

    cell = space.full_event()
    level1 = Dipartition(cell, ((st(2), st(1)),), (space.event(()), st(3)))
    level2 = Dipartition(cell, ((st(3), st(2)),), (st(1), space.event(())))
    return FilterSeq(cell, 1, 2, (level1, level2))


def three_state_filtering_factor(n: int, quotas: tuple[tuple[int, int], ...],
                                 rotation: int = 0) -> Mechanism:
    """One-cell mechanism with the three-state filter and the given
    ((t_tilde1, t_hat1), (t_tilde2, t_hat2)) quota assignment."""
    space, outs = _binary_spaces(3)
    filt = three_state_filter(space, rotation)
    table = QuotaTable(1, 2, ((quotas[0],), (quotas[1],)))
    factor = FilteringFactor(space.full_event(), a=0, b=1,
                             filter=filt, quotas=table)
    feas = FeasibilityMap.unconstrained(space, outs)
    return Mechanism(space, outs, feas, n, (Cell("C1", factor),))


def example2(n: int = 3) -> Mechanism:
    """The three-state filtering factor with its published quota listing."""
    return three_state_filtering_factor(n, ((2, 1), (2, 1)))


# ---------------------------------------------------------------------------
# the seven-state filter and its factors


def seven_state_space() -> StateSpace:
    return StateSpace(tuple(f"w{i}" for i in range(1, 8)))


def example1_dipartitions() -> dict[str, Dipartition]:
    """The three seven-state dipartitions used by the filter classification
    demo, plus the broken replacement for the third one."""
    space = seven_state_space()
    cell = space.full_event()
    ev = space.event
    c1 = Dipartition(cell, ((ev(("w1",)), ev(("w4",))),
                            (ev(("w2",)), ev(("w3",)))),
                     (ev(()), ev(("w5", "w6", "w7"))))
    c2 = Dipartition(cell, ((ev(("w5", "w6")), ev(("w1",))),
                            (ev(("w2",)), ev(("w3",)))),
                     (ev(("w4",)), ev(("w7",))))
    c3 = Dipartition(cell, ((ev(("w7",)), ev(("w2", "w5"))),),
                     (ev(("w1", "w3", "w4", "w6")), ev(())))
    c3_bad = Dipartition(cell, ((ev(("w7",)), ev(("w3", "w5"))),),
                         (ev(("w1", "w2", "w4", "w6")), ev(())))
    return {"C1": c1, "C2": c2, "C3": c3, "C3bad": c3_bad}


def example1_filter_candidates() -> dict[str, FilterSeq]:
    space = seven_state_space()
    cell = space.full_event()
    d = example1_dipartitions()
    return {
        "good": FilterSeq(cell, 1, 3, (d["C1"], d["C2"], d["C3"])),
        "disconnected": FilterSeq(cell, 1, 2, (d["C1"], d["C2"])),
        "inclusion": FilterSeq(cell, 1, 3, (d["C1"], d["C2"], d["C3bad"])),
    }


def _seven_state_factor(quota: tuple[int, int]) -> Mechanism:
    space, outs = _binary_spaces(7)
    cell = space.full_event()
    ev = space.event
    level1 = Dipartition(cell, ((ev(("w1", "w2", "w3")), ev(("w4",))),),
                         (ev(()), ev(("w5", "w6", "w7"))))
    level2 = Dipartition(cell, ((ev(("w6",)), ev(("w1",))),
                                (ev(("w5",)), ev(("w2",)))),
                         (ev(("w3", "w4")), ev(("w7",))))
    level3 = Dipartition(cell, ((ev(("w7",)), ev(("w5", "w6"))),),
                         (ev(("w1", "w2", "w3", "w4")), ev(())))
    filt = FilterSeq(cell, 1, 3, (level1, level2, level3))
    table = QuotaTable(1, 3, ((quota,), (quota, quota), (quota,)))
    factor = FilteringFactor(cell, a=0, b=1, filter=filt, quotas=table)
    feas = FeasibilityMap.unconstrained(space, outs)
    return Mechanism(space, outs, feas, 10, (Cell("C1", factor),))


def example3() -> Mechanism:
    """Seven-state filtering factor whose two-vote quota on the second side
    breaks the iso-filtering conditions (and strategy-proofness)."""
    return _seven_state_factor((1, 2))


def example4ii() -> Mechanism:
    """The same filter with all quotas 1: an iso-filtering factor."""
    return _seven_state_factor((1, 1))


def example3_witness_profile() -> Profile:
    """A ten-voter profile at which the seven-state factor is manipulable:
    two supporters of the first outcome, and one opposing voter who puts
    more than half her mass on w6."""
    mech = example3()
    space, outs = mech.space, mech.outcomes

    def pref(sign_a: bool, weights: tuple[int, ...]) -> Preference:
        total = sum(weights)
        values = [Fraction(1), Fraction(0)] if sign_a else [Fraction(0), Fraction(1)]
        return Preference(Valuation(outs, values),
                          Belief(space, [Fraction(w, total) for w in weights]))

    deviator = pref(False, (4, 6, 5, 3, 10, 60, 12))
    blocker = pref(False, (22, 20, 10, 5, 12, 11, 20))
    supporter = pref(True, (5, 6, 4, 10, 12, 23, 40))
    return Profile((deviator,) + (blocker,) * 7 + (supporter, supporter))


# ---------------------------------------------------------------------------
# the majority counterexample


def majority_fixture() -> PairwiseMajority:
    """Simple-majority voting between two fixed acts; anonymous and
    strategy-proof but not range-unanimous."""
    space = StateSpace(("w1", "w2", "w3"))
    outs = OutcomeSpace(("a", "b", "c", "d"))
    feas = FeasibilityMap.from_labels(space, outs, {
        "w1": ("a", "b"), "w2": ("a", "c", "d"), "w3": ("a", "c", "d")})
    f = Act.from_labels(space, outs, {"w1": "a", "w2": "c", "w3": "d"})
    g = Act.from_labels(space, outs, {"w1": "b", "w2": "d", "w3": "c"})
    return PairwiseMajority(space, outs, feas, 5, f, g)


def majority_unanimous_profiles(count: int = 4) -> list[Profile]:
    """Profiles where every voter values c near 1 and holds a near-balanced
    belief over w2 and w3: the shared favorite within the rule's range is
    then an act the rule can never pick."""
    fixture = majority_fixture()
    space, outs = fixture.space, fixture.outcomes
    profiles = []
    for salt in range(count):
        prefs = []
        for voter in range(fixture.n):
            jitter = Fraction(1, 200 + 17 * voter + 31 * salt)
            values = [Fraction(0)] * outs.size
            values[outs.index("c")] = Fraction(1)
            values[outs.index("a")] = Fraction(1, 2) - jitter
            values[outs.index("b")] = Fraction(1, 4) + jitter
            values[outs.index("d")] = Fraction(0)
            weights = (400, 300 + voter + salt, 299 - voter)
            total = sum(weights)
            belief = Belief(space, [Fraction(w, total) for w in weights])
            prefs.append(Preference(Valuation(outs, values), belief))
        profiles.append(Profile(tuple(prefs)))
    return profiles


DEMO_NAMES = ("reunion-phi", "reunion-phi-prime", "example2", "example3",
              "example4ii", "majority-fixture")


def demo_mechanism(name: str):
    if name == "reunion-phi":
        return reunion_phi()
    if name == "reunion-phi-prime":
        return reunion_phi_prime()
    if name == "example2":
        return example2()
    if name == "example3":
        return example3()
    if name == "example4ii":
        return example4ii()
    if name == "majority-fixture":
        return majority_fixture()
    raise SuvoteError(f"unknown demo {name!r}; choices: {', '.join(DEMO_NAMES)}")
