"""Composite social choice functions: one factor per cell of a state partition.

Evaluation conditions each voter's belief on a cell, lets the cell's factor
pick a sub-act, and concatenates the pieces. A raw simple-majority vote
between two fixed acts is also provided as a negative fixture for the axiom
harness.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import Diagnostic, GenericityViolation, SuvoteError
from .factors import FactorSpec, evaluate_factor, factor_range, validate_factor
from .model import (
    Act,
    Event,
    FeasibilityMap,
    OutcomeSpace,
    Preference,
    Profile,
    StateSpace,
    concat,
    conditional_belief,
    expected_utility,
    supporters,
)


@dataclass(frozen=True)
class Cell:
    name: str
    factor: FactorSpec

    @property
    def event(self) -> Event:
        return self.factor.cell


@dataclass(frozen=True)
class Mechanism:
    """A partition of the state space into cells with one factor per cell.

    Cells are stored sorted by their lowest state so structurally equal
    mechanisms compare equal and serialize identically.
    """

    space: StateSpace
    outcomes: OutcomeSpace
    feasibility: FeasibilityMap
    n: int
    cells: tuple[Cell, ...]

    anonymous_by_construction = True

    def __post_init__(self):
        ordered = tuple(sorted(self.cells,
                               key=lambda c: (c.event.mask & -c.event.mask, c.name)))
        object.__setattr__(self, "cells", ordered)

    def cell_named(self, name: str) -> Cell:
        for cell in self.cells:
            if cell.name == name:
                return cell
        raise SuvoteError(f"no cell named {name!r}")

    def evaluate(self, profile: Profile) -> Act:
        return evaluate_mechanism(self, profile)

    def ranges(self) -> dict[int, frozenset[int]]:
        return mechanism_range(self)


def validate_mechanism(mech: Mechanism) -> list[Diagnostic]:
    """Partition exactness, per-factor validity, feasibility of factor outcomes."""
    diags: list[Diagnostic] = []
    if mech.n < 2:
        diags.append(Diagnostic("mechanism-n", "a mechanism needs at least 2 voters"))
    if mech.feasibility.space != mech.space or mech.feasibility.outcomes != mech.outcomes:
        return [Diagnostic("mechanism-space", "feasibility map on the wrong spaces")]
    if not mech.cells:
        return [Diagnostic("mechanism-cells", "a mechanism needs at least one cell")]
    names = [c.name for c in mech.cells]
    if len(set(names)) != len(names):
        diags.append(Diagnostic("mechanism-cells", "duplicate cell names"))
    union = 0
    for cell in mech.cells:
        ev = cell.event
        if ev.space != mech.space:
            return [Diagnostic("mechanism-space",
                               f"cell {cell.name} is not on the mechanism space")]
        if not ev:
            diags.append(Diagnostic("mechanism-cells", f"cell {cell.name} is empty"))
        if union & ev.mask:
            diags.append(Diagnostic(
                "mechanism-overlap", f"cell {cell.name} overlaps an earlier cell",
                (cell.name,)))
        union |= ev.mask
    if union != mech.space.full_event().mask:
        diags.append(Diagnostic("mechanism-cover", "cells do not cover the state space"))
    for cell in mech.cells:
        for d in validate_factor(cell.factor, mech.n, mech.feasibility):
            diags.append(Diagnostic(d.code, f"cell {cell.name}: {d.message}",
                                    (cell.name,) + d.context))
    return diags


def _check_profile(mech, profile: Profile) -> None:
    if profile.n != mech.n:
        raise SuvoteError(f"mechanism expects {mech.n} voters, got {profile.n}")
    if profile.prefs[0].belief.space != mech.space:
        raise SuvoteError("profile beliefs are not on the mechanism's state space")
    if profile.prefs[0].valuation.outcomes != mech.outcomes:
        raise SuvoteError("profile valuations are not on the mechanism's outcomes")


def restrict_profile(profile: Profile, cell: Event) -> Profile:
    """Same valuations, beliefs conditioned on the cell sub-space."""
    return Profile(tuple(
        Preference(p.valuation, conditional_belief(p.belief, cell))
        for p in profile.prefs))


def evaluate_mechanism(mech: Mechanism, profile: Profile) -> Act:
    """Condition per cell, evaluate each factor, concatenate the sub-acts."""
    _check_profile(mech, profile)
    pieces = []
    for cell in mech.cells:
        sub_profile = restrict_profile(profile, cell.event)
        pieces.append((cell.event, evaluate_factor(cell.factor, sub_profile)))
    act = concat(mech.space, mech.outcomes, pieces)
    assert mech.feasibility.act_feasible(act)
    return act


def mechanism_range(mech: Mechanism) -> dict[int, frozenset[int]]:
    """Per-state outcome sets reachable across all profiles."""
    out: dict[int, frozenset[int]] = {}
    for cell in mech.cells:
        out.update(factor_range(cell.factor, mech.n))
    return out


def section_counts(mech: Mechanism, profile: Profile) -> dict[str, int]:
    """Per binary cell, the number of voters supporting the first outcome."""
    counts: dict[str, int] = {}
    for cell in mech.cells:
        factor = cell.factor
        if factor.kind == "constant":
            continue
        n_a, _ = supporters(profile, factor.a, factor.b)
        counts[cell.name] = len(n_a)
    return counts


def evaluation_json(mech: Mechanism, profile: Profile) -> dict:
    act = evaluate_mechanism(mech, profile)
    return {"act": act.to_json(), "sections": section_counts(mech, profile)}


def genericity_accept(mech) -> "callable":
    """Predicate for profile generators: the mechanism evaluates without ties."""

    def accept(profile: Profile) -> bool:
        try:
            mech.evaluate(profile)
        except GenericityViolation:
            return False
        return True

    return accept


# ---------------------------------------------------------------------------
# raw (non-factored) rules used as negative fixtures


@dataclass(frozen=True)
class PairwiseMajority:
    """Simple-majority vote between two fixed feasible acts."""

    space: StateSpace
    outcomes: OutcomeSpace
    feasibility: FeasibilityMap
    n: int
    f: Act
    g: Act

    anonymous_by_construction = True

    def __post_init__(self):
        if not self.feasibility.act_feasible(self.f) or \
                not self.feasibility.act_feasible(self.g):
            raise SuvoteError("majority fixture acts must be feasible")

    def evaluate(self, profile: Profile) -> Act:
        return evaluate_pairwise_majority(self, profile)

    def ranges(self) -> dict[int, frozenset[int]]:
        return {s: frozenset((self.f.assignment[s], self.g.assignment[s]))
                for s in range(self.space.size)}


def evaluate_pairwise_majority(raw: PairwiseMajority, profile: Profile) -> Act:
    """Return whichever of the two acts a strict majority prefers."""
    _check_profile(raw, profile)
    votes_f = 0
    for i, pref in enumerate(profile.prefs):
        eu_f = expected_utility(raw.f, pref)
        eu_g = expected_utility(raw.g, pref)
        if eu_f == eu_g:
            raise GenericityViolation(
                f"voter {i} is indifferent between the two acts", voter=i)
        if eu_f > eu_g:
            votes_f += 1
    if 2 * votes_f == profile.n:
        raise GenericityViolation("the vote splits exactly in half")
    return raw.f if 2 * votes_f > profile.n else raw.g
