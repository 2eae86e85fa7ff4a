"""The five factor families and their evaluation on a cell.

A factor chooses a sub-act on its cell from the reported profile. Constant
factors ignore reports; the four binary families (simple, quasi-dictatorial,
dyadic, filtering) pick between two fixed outcomes per state, driven by the
split of voters over the outcome pair and by exact belief comparisons.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Union

from .errors import Diagnostic, GenericityViolation, SuvoteError
from .events import FilterSeq, check_non_nested, validate_filter
from .model import (
    Act,
    Event,
    FeasibilityMap,
    OutcomeSpace,
    Profile,
    StateSpace,
    eta,
    supporters,
)


@dataclass(frozen=True)
class HTable:
    """Non-decreasing 0/1 aggregation of the two favorable-vote counts.

    Either a threshold on the total vote count (linear isoquants), or an
    explicit row-major grid indexed by the two counts separately.
    """

    threshold: int | None = None
    table: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if (self.threshold is None) == (self.table is None):
            raise SuvoteError("HTable needs exactly one of threshold or table")

    def value(self, m_a: int, m_b: int) -> int:
        if self.threshold is not None:
            return 1 if m_a + m_b >= self.threshold else 0
        table = self.table
        if m_a >= len(table) or m_b >= len(table[0]):
            raise SuvoteError("H table queried outside its domain")
        return table[m_a][m_b]

    def has_linear_isoquants(self) -> bool:
        if self.threshold is not None:
            return True
        by_sum: dict[int, set[int]] = {}
        for i, row in enumerate(self.table):
            for j, v in enumerate(row):
                by_sum.setdefault(i + j, set()).add(v)
        return all(len(vals) == 1 for vals in by_sum.values())


@dataclass(frozen=True)
class QuotaTable:
    """Per level and pair index: the two triggering quotas (t_tilde, t_hat).

    t_tilde counts supporters of the first outcome, t_hat supporters of the
    second; the values k+1 and n-k+1 can never be met at level k and act as
    "this side never triggers" sentinels.
    """

    k_lo: int
    k_hi: int
    entries: tuple[tuple[tuple[int, int], ...], ...]

    def quotas(self, k: int, m: int) -> tuple[int, int]:
        """Quotas for pair index m (1-based) at level k."""
        return self.entries[k - self.k_lo][m - 1]


@dataclass(frozen=True)
class ConstantFactor:
    cell: Event
    c: int

    kind = "constant"


@dataclass(frozen=True)
class SimpleFactor:
    cell: Event
    a: int
    b: int
    k_bar: int

    kind = "simple"


@dataclass(frozen=True)
class QuasiDictFactor:
    cell: Event
    a: int
    b: int
    menu: tuple[Event, ...]

    kind = "quasidict"

    def __post_init__(self):
        # the menu is a set; store it canonically sorted
        ordered = tuple(sorted(self.menu, key=lambda ev: tuple(ev.indices())))
        object.__setattr__(self, "menu", ordered)


@dataclass(frozen=True)
class DyadicFactor:
    cell: Event
    a: int
    b: int
    e: Event
    f: Event
    k_lo: int
    k_hi: int
    h: HTable

    kind = "dyadic"


@dataclass(frozen=True)
class FilteringFactor:
    cell: Event
    a: int
    b: int
    filter: FilterSeq
    quotas: QuotaTable

    kind = "filtering"


FactorSpec = Union[ConstantFactor, SimpleFactor, QuasiDictFactor,
                   DyadicFactor, FilteringFactor]

BINARY_KINDS = ("simple", "quasidict", "dyadic", "filtering")


def factor_outcomes(factor: FactorSpec) -> tuple[int, ...]:
    if factor.kind == "constant":
        return (factor.c,)
    return (factor.a, factor.b)


def validate_factor(factor: FactorSpec, n: int,
                    feasibility: FeasibilityMap) -> list[Diagnostic]:
    """Check every structural invariant of one factor; diagnostics are data."""
    diags: list[Diagnostic] = []
    cell = factor.cell
    if cell.space != feasibility.space:
        return [Diagnostic("factor-space", "factor cell not on the mechanism space")]
    if not cell:
        return [Diagnostic("factor-cell", "factor cell is empty")]
    for outcome in factor_outcomes(factor):
        for s in cell.indices():
            if not feasibility.allows(s, outcome):
                diags.append(Diagnostic(
                    "factor-infeasible",
                    f"outcome {feasibility.outcomes.labels[outcome]} unavailable "
                    f"in state {cell.space.labels[s]}",
                    (outcome, s)))
    if factor.kind != "constant" and factor.a == factor.b:
        diags.append(Diagnostic("factor-pair", "binary factor needs distinct outcomes"))

    if factor.kind == "constant":
        pass  # the feasibility check above is everything a constant factor needs

    elif factor.kind == "simple":
        if not 1 <= factor.k_bar <= n:
            diags.append(Diagnostic(
                "simple-quota", f"quota {factor.k_bar} outside 1..{n}", (factor.k_bar,)))

    elif factor.kind == "quasidict":
        menu = factor.menu
        if len(menu) < 3:
            diags.append(Diagnostic("menu-size", "menu needs at least three events"))
        union = 0
        for ev in menu:
            if ev.space != cell.space:
                return [Diagnostic("menu-space", "menu event on a different space")]
            if not ev:
                diags.append(Diagnostic("menu-empty", "menu events must be nonempty"))
            if not ev.issubset(cell):
                diags.append(Diagnostic(
                    "menu-outside", f"menu event {ev} leaves the cell", (ev.mask,)))
            union |= ev.mask
        if len({ev.mask for ev in menu}) != len(menu):
            diags.append(Diagnostic("menu-duplicate", "menu events must be distinct"))
        if union != cell.mask:
            diags.append(Diagnostic("menu-cover", "menu must cover the cell"))
        nested = check_non_nested([ev for ev in menu if ev])
        if nested is not None:
            diags.append(Diagnostic(
                "menu-nested", f"menu event {nested[0]} is nested in {nested[1]}",
                (nested[0].mask, nested[1].mask)))

    elif factor.kind == "dyadic":
        if not factor.e or not factor.f:
            diags.append(Diagnostic("dyadic-partition", "both events must be nonempty"))
        if factor.e.mask & factor.f.mask:
            diags.append(Diagnostic("dyadic-partition", "the two events overlap"))
        if factor.e.mask | factor.f.mask != cell.mask:
            diags.append(Diagnostic("dyadic-partition", "events must partition the cell"))
        if not 1 <= factor.k_lo <= factor.k_hi <= n - 1:
            diags.append(Diagnostic(
                "dyadic-band", f"thresholds {factor.k_lo}..{factor.k_hi} outside 1..{n - 1}"))
        else:
            diags.extend(_validate_h(factor.h, n, factor.k_lo, factor.k_hi))

    elif factor.kind == "filtering":
        if n < 3:
            diags.append(Diagnostic("filtering-n", "filtering factors need n >= 3"))
        if len(cell) < 3:
            diags.append(Diagnostic("filtering-cell", "filtering cells need >= 3 states"))
        flt = factor.filter
        if not 1 <= flt.k_lo < flt.k_hi <= n - 1:
            diags.append(Diagnostic(
                "filtering-band", f"levels {flt.k_lo}..{flt.k_hi} must satisfy "
                f"1 <= k_lo < k_hi <= {n - 1}"))
        if flt.cell != cell:
            diags.append(Diagnostic("filtering-cell", "filter is over a different cell"))
        diags.extend(validate_filter(flt))
        diags.extend(_validate_quotas(factor.quotas, flt, n))

    else:
        raise SuvoteError(f"unknown factor kind {factor.kind!r}")
    return diags


def _validate_h(h: HTable, n: int, k_lo: int, k_hi: int) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    if h.threshold is not None:
        if not 1 <= h.threshold <= n:
            diags.append(Diagnostic(
                "h-threshold", f"threshold {h.threshold} outside 1..{n}"))
        return diags
    table = h.table
    rows, cols = len(table), len(table[0]) if table else 0
    if any(len(row) != cols for row in table):
        return [Diagnostic("h-shape", "H table rows have unequal lengths")]
    if any(v not in (0, 1) for row in table for v in row):
        return [Diagnostic("h-values", "H table entries must be 0 or 1")]
    if rows != k_hi + 1 or cols != n - k_lo + 1:
        diags.append(Diagnostic(
            "h-shape",
            f"H table must span counts 0..{k_hi} by 0..{n - k_lo}, got "
            f"{rows}x{cols}"))
        return diags
    for i in range(rows):
        for j in range(cols):
            if i + 1 < rows and table[i][j] > table[i + 1][j]:
                diags.append(Diagnostic("h-monotone", "H decreases in the first count"))
            if j + 1 < cols and table[i][j] > table[i][j + 1]:
                diags.append(Diagnostic("h-monotone", "H decreases in the second count"))
    if table[0][0] != 0:
        diags.append(Diagnostic("h-boundary", "H(0,0) must be 0"))
    for k in range(k_lo, k_hi + 1):
        if table[k][n - k] != 1:
            diags.append(Diagnostic("h-boundary", f"H({k},{n - k}) must be 1"))
    if k_lo < k_hi and not h.has_linear_isoquants():
        diags.append(Diagnostic(
            "h-isoquant",
            "a band of widths needs H constant on equal total counts"))
    # keep only the first report per code to avoid noise
    seen: set[str] = set()
    out = []
    for d in diags:
        if d.code not in seen:
            seen.add(d.code)
            out.append(d)
    return out


def _validate_quotas(quotas: QuotaTable, flt: FilterSeq, n: int) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    if quotas.k_lo != flt.k_lo or quotas.k_hi != flt.k_hi:
        return [Diagnostic("quota-levels", "quota table levels differ from the filter")]
    if len(quotas.entries) != flt.k_hi - flt.k_lo + 1:
        return [Diagnostic("quota-shape", "one quota row per level required")]
    for k in range(flt.k_lo, flt.k_hi + 1):
        level = flt.level(k)
        row = quotas.entries[k - quotas.k_lo]
        if len(row) != len(level.pairs):
            diags.append(Diagnostic(
                "quota-shape", f"level {k} needs one quota pair per event pair"))
            continue
        for m, (t_tilde, t_hat) in enumerate(row, start=1):
            if not 1 <= t_tilde <= k + 1:
                diags.append(Diagnostic(
                    "quota-range",
                    f"level {k} pair {m}: first quota {t_tilde} outside 1..{k + 1}",
                    (k, m, t_tilde)))
            if not 1 <= t_hat <= n - k + 1:
                diags.append(Diagnostic(
                    "quota-range",
                    f"level {k} pair {m}: second quota {t_hat} outside 1..{n - k + 1}",
                    (k, m, t_hat)))
    return diags


def is_iso_filtering(factor: FilteringFactor) -> list[Diagnostic]:
    """Check the quota conditions tying consecutive levels of a filtering factor.

    A state that keeps its binary status from one level to the next forces
    single-vote quotas on the two sides that could flip it; a pair surviving
    verbatim into the next level forces single-vote quotas at both levels.
    An empty list means the factor is iso-filtering.
    """
    if factor.kind != "filtering":
        raise SuvoteError("iso-filtering applies to filtering factors")
    flt, quotas = factor.filter, factor.quotas
    violations: list[Diagnostic] = []
    for k in range(flt.k_lo, flt.k_hi):
        cur, nxt = flt.level(k), flt.level(k + 1)
        for m, (e_cur, f_cur) in enumerate(cur.pairs, start=1):
            t_tilde_cur, t_hat_cur = quotas.quotas(k, m)
            for m2, (e_nxt, f_nxt) in enumerate(nxt.pairs, start=1):
                t_tilde_nxt, t_hat_nxt = quotas.quotas(k + 1, m2)
                if e_cur.mask & f_nxt.mask:
                    if t_hat_cur != 1:
                        violations.append(Diagnostic(
                            "iso-intersection",
                            f"levels ({k},{k + 1}): {e_cur} meets {f_nxt} but the "
                            f"second quota of level {k} pair {m} is {t_hat_cur}, not 1",
                            (k, m, m2, "t_hat", t_hat_cur, f_nxt.mask)))
                    if t_tilde_nxt != 1:
                        violations.append(Diagnostic(
                            "iso-intersection",
                            f"levels ({k},{k + 1}): {e_cur} meets {f_nxt} but the "
                            f"first quota of level {k + 1} pair {m2} is {t_tilde_nxt}, not 1",
                            (k, m, m2, "t_tilde", t_tilde_nxt, f_nxt.mask)))
                if (e_nxt.mask, f_nxt.mask) == (e_cur.mask, f_cur.mask):
                    for name, val in (("t_tilde", t_tilde_cur), ("t_hat", t_hat_cur),
                                      ("t_tilde", t_tilde_nxt), ("t_hat", t_hat_nxt)):
                        if val != 1:
                            violations.append(Diagnostic(
                                "iso-surviving-pair",
                                f"levels ({k},{k + 1}): pair {m} survives verbatim "
                                f"but quota {name}={val} is not 1",
                                (k, m, m2, name, val)))
    return violations


# ---------------------------------------------------------------------------
# evaluation


def _binary_act(sub: StateSpace, outcomes: OutcomeSpace, a: int, b: int,
                a_mask: int) -> Act:
    return Act(sub, outcomes,
               tuple(a if a_mask >> i & 1 else b for i in range(sub.size)))


def evaluate_factor(factor: FactorSpec, profile: Profile) -> Act:
    """Evaluate one factor on a profile whose beliefs live on the cell sub-space.

    The caller is responsible for conditioning beliefs on the cell; factor
    parameters carry parent-space events and are translated here.
    """
    sub = factor.cell.subspace()
    outcomes = profile.prefs[0].valuation.outcomes
    if profile.prefs[0].belief.space != sub:
        raise SuvoteError("profile beliefs must live on the factor's cell")

    if factor.kind == "constant":
        return Act(sub, outcomes, tuple(factor.c for _ in range(sub.size)))

    n_a_set, n_b_set = supporters(profile, factor.a, factor.b)
    n_a = len(n_a_set)
    full = (1 << sub.size) - 1

    if factor.kind == "simple":
        mask = full if n_a >= factor.k_bar else 0
        return _binary_act(sub, outcomes, factor.a, factor.b, mask)

    if factor.kind == "quasidict":
        if n_a == 0:
            return _binary_act(sub, outcomes, factor.a, factor.b, 0)
        if n_a >= 2:
            return _binary_act(sub, outcomes, factor.a, factor.b, full)
        (voter,) = n_a_set
        belief = profile.prefs[voter].belief
        menu_local = [ev.restrict(sub) for ev in factor.menu]
        probs = [belief.prob(ev) for ev in menu_local]
        best = max(probs)
        tops = [i for i, p in enumerate(probs) if p == best]
        if len(tops) > 1:
            raise GenericityViolation(
                f"voter {voter} ties menu events {factor.menu[tops[0]]} and "
                f"{factor.menu[tops[1]]}", voter=voter,
                detail=(factor.menu[tops[0]], factor.menu[tops[1]]))
        return _binary_act(sub, outcomes, factor.a, factor.b,
                           menu_local[tops[0]].mask)

    if factor.kind == "dyadic":
        if n_a <= factor.k_lo - 1:
            return _binary_act(sub, outcomes, factor.a, factor.b, 0)
        if n_a >= factor.k_hi + 1:
            return _binary_act(sub, outcomes, factor.a, factor.b, full)
        e_loc, f_loc = factor.e.restrict(sub), factor.f.restrict(sub)
        m_a = eta(profile, n_a_set, e_loc, f_loc)
        m_b = eta(profile, n_b_set, f_loc, e_loc)
        mask = e_loc.mask if factor.h.value(m_a, m_b) == 1 else f_loc.mask
        return _binary_act(sub, outcomes, factor.a, factor.b, mask)

    if factor.kind == "filtering":
        flt = factor.filter
        if n_a <= flt.k_lo - 1:
            return _binary_act(sub, outcomes, factor.a, factor.b, 0)
        if n_a >= flt.k_hi + 1:
            return _binary_act(sub, outcomes, factor.a, factor.b, full)
        level = flt.level(n_a)
        z_mask = level.g_a.restrict(sub).mask
        for m, (e, f) in enumerate(level.pairs, start=1):
            t_tilde, t_hat = factor.quotas.quotas(n_a, m)
            e_loc, f_loc = e.restrict(sub), f.restrict(sub)
            # the flipped sub-act (first outcome on F) wins when enough voters
            # on either side ask for it
            flipped = (eta(profile, n_a_set, f_loc, e_loc) >= t_tilde
                       or eta(profile, n_b_set, e_loc, f_loc) >= t_hat)
            z_mask |= f_loc.mask if flipped else e_loc.mask
        return _binary_act(sub, outcomes, factor.a, factor.b, z_mask)

    raise SuvoteError(f"unknown factor kind {factor.kind!r}")


def factor_range(factor: FactorSpec, n: int) -> dict[int, frozenset[int]]:
    """Per parent-state sets of outcomes the factor can select.

    Constant cells yield singletons. Every binary family reaches both
    outcomes in every cell state: zero supporters force one constant
    sub-act and full support forces the other, and the parameter ranges
    keep both boundary branches live.
    """
    if factor.kind == "constant":
        return {s: frozenset((factor.c,)) for s in factor.cell.indices()}
    pair = frozenset((factor.a, factor.b))
    return {s: pair for s in factor.cell.indices()}
