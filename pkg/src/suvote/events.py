"""Combinatorics over event collections.

Dipartitions and filters (validity plus connectivity), non-nestedness,
maximal decomposition of an event collection into trivial/dyadic/rich
components, and the top-triple search used to probe rich menus.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import Diagnostic, ResourceBudgetError, SuvoteError
from .model import Belief, Event, StateSpace

# ---------------------------------------------------------------------------
# dipartitions and filters


@dataclass(frozen=True)
class Dipartition:
    """Ordered disjoint event pairs plus a residual pair, covering a cell.

    Each (E_m, F_m) is a binary choice offered to voters; the residual
    (G_a, G_b) fixes the two outcomes regardless of beliefs.
    """

    cell: Event
    pairs: tuple[tuple[Event, Event], ...]
    residual: tuple[Event, Event]

    @property
    def g_a(self) -> Event:
        return self.residual[0]

    @property
    def g_b(self) -> Event:
        return self.residual[1]

    def all_events(self) -> list[Event]:
        out = []
        for e, f in self.pairs:
            out.extend((e, f))
        out.extend(self.residual)
        return out


def validate_dipartition(d: Dipartition) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    space = d.cell.space
    for ev in d.all_events():
        if ev.space != space:
            return [Diagnostic("dipartition-space", "events on mixed state spaces")]
    if not d.pairs:
        diags.append(Diagnostic("dipartition-pairs", "needs at least one event pair"))
    union = 0
    for ev in d.all_events():
        if union & ev.mask:
            diags.append(Diagnostic(
                "dipartition-overlap", f"event {ev} overlaps an earlier one",
                (ev.mask,)))
        union |= ev.mask
    if union != d.cell.mask:
        diags.append(Diagnostic(
            "dipartition-cover", "events do not cover the cell exactly",
            (union, d.cell.mask)))
    for m, (e, f) in enumerate(d.pairs, start=1):
        if not e or not f:
            diags.append(Diagnostic(
                "dipartition-empty-pair", f"pair {m} has an empty side", (m,)))
    if not d.g_a and not d.g_b:
        diags.append(Diagnostic(
            "dipartition-residual", "residual events may not both be empty"))
    return diags


def dipartition_relation(d: Dipartition) -> frozenset[tuple[int, int]]:
    """Binary relation: two states relate iff some pair's union holds both."""
    rel: set[tuple[int, int]] = set()
    for e, f in d.pairs:
        block = list(e.union(f).indices())
        for i in block:
            for j in block:
                rel.add((i, j))
    return frozenset(rel)


@dataclass(frozen=True)
class FilterSeq:
    """One dipartition per level k in [k_lo, k_hi], all over the same cell."""

    cell: Event
    k_lo: int
    k_hi: int
    levels: tuple[Dipartition, ...]

    def level(self, k: int) -> Dipartition:
        if not self.k_lo <= k <= self.k_hi:
            raise SuvoteError(f"level {k} outside [{self.k_lo}, {self.k_hi}]")
        return self.levels[k - self.k_lo]


class _UnionFind:
    def __init__(self, items: Iterable[int]):
        self.parent = {i: i for i in items}

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        self.parent[self.find(i)] = self.find(j)


def validate_filter(seq: FilterSeq) -> list[Diagnostic]:
    """Structural filter check: connectivity plus the level-linking inclusions.

    A removed pair must leave its filtered-out event inside the next (or
    previous) residual; the orientation of every pair matters.
    """
    diags: list[Diagnostic] = []
    if seq.k_lo > seq.k_hi:
        return [Diagnostic("filter-levels", "k_lo must not exceed k_hi")]
    if len(seq.levels) != seq.k_hi - seq.k_lo + 1:
        return [Diagnostic("filter-levels", "one dipartition per level required")]
    for k, level in zip(range(seq.k_lo, seq.k_hi + 1), seq.levels):
        if level.cell != seq.cell:
            return [Diagnostic("filter-cell", f"level {k} is over a different cell")]
        sub = validate_dipartition(level)
        if sub:
            return [Diagnostic("filter-dipartition",
                               f"level {k}: {d.message}", (k,) + d.context)
                    for d in sub]

    states = list(seq.cell.indices())
    uf = _UnionFind(states)
    for level in seq.levels:
        for e, f in level.pairs:
            block = list(e.union(f).indices())
            for i in block[1:]:
                uf.union(block[0], i)
    roots = {uf.find(i) for i in states}
    if len(roots) > 1:
        comps: dict[int, list[int]] = {}
        for i in states:
            comps.setdefault(uf.find(i), []).append(i)
        groups = sorted(comps.values(), key=min)
        pair = (min(groups[0]), min(groups[1]))
        diags.append(Diagnostic(
            "filter-disconnected",
            f"states {seq.cell.space.labels[pair[0]]} and "
            f"{seq.cell.space.labels[pair[1]]} are not linked by any chain of pairs",
            pair))

    for k in range(seq.k_lo, seq.k_hi):
        cur, nxt = seq.level(k), seq.level(k + 1)
        cur_pairs = {(e.mask, f.mask) for e, f in cur.pairs}
        nxt_pairs = {(e.mask, f.mask) for e, f in nxt.pairs}
        for m, (e, f) in enumerate(cur.pairs, start=1):
            if (e.mask, f.mask) not in nxt_pairs and not f.issubset(nxt.g_a):
                diags.append(Diagnostic(
                    "filter-inclusion",
                    f"pair {m} of level {k} is dropped at level {k + 1} "
                    f"but {f} is not inside the next residual a-event {nxt.g_a}",
                    (k, m, "F", f.mask, nxt.g_a.mask)))
        for m, (e, f) in enumerate(nxt.pairs, start=1):
            if (e.mask, f.mask) not in cur_pairs and not e.issubset(cur.g_b):
                diags.append(Diagnostic(
                    "filter-inclusion",
                    f"pair {m} of level {k + 1} is new at that level "
                    f"but {e} is not inside the previous residual b-event {cur.g_b}",
                    (k + 1, m, "E", e.mask, cur.g_b.mask)))
    return diags


# ---------------------------------------------------------------------------
# non-nestedness


def check_non_nested(collection: Sequence[Event]):
    """Return None if no event contains another, else the offending pair."""
    for a, b in itertools.combinations(collection, 2):
        if not a or not b:
            raise SuvoteError("non-nestedness is defined for nonempty events")
        if a.issubset(b) or b.issubset(a):
            return (a, b)
    return None


# ---------------------------------------------------------------------------
# maximal decomposition
#
# A decomposition of a collection of distinct nonempty events corresponds to
# a partition of the union ground set into blocks such that (a) every event
# meets every block, (b) the traces of the collection on the blocks multiply
# back to exactly the collection, and (c) at most one block carries a
# single-trace ("forced") component. The maximal decomposition has the most
# blocks; ties are broken by the lexicographically smallest block layout, so
# both the direct algorithm and the brute-force oracle name one canonical
# answer.

KIND_TRIVIAL = "trivial"
KIND_DYADIC = "dyadic"
KIND_RICH = "rich"


@dataclass(frozen=True)
class Decomposition:
    space: StateSpace
    components: tuple[tuple[Event, ...], ...]
    kinds: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.components)

    def rich_components(self) -> list[tuple[Event, ...]]:
        return [c for c, k in zip(self.components, self.kinds) if k == KIND_RICH]

    @property
    def richly_decomposable(self) -> bool:
        return any(k == KIND_RICH for k in self.kinds)

    def to_json(self) -> dict:
        return {
            "components": [
                {"kind": k, "events": [sorted(e.labels()) for e in comp]}
                for comp, k in zip(self.components, self.kinds)
            ]
        }


def _classify(size: int) -> str:
    if size == 1:
        return KIND_TRIVIAL
    if size == 2:
        return KIND_DYADIC
    return KIND_RICH


def _trace(masks: Sequence[int], block: int) -> frozenset[int]:
    return frozenset(m & block for m in masks)


def _blocks_to_decomposition(space: StateSpace, masks: Sequence[int],
                             blocks: Iterable[int]) -> Decomposition:
    comps = []
    for block in sorted(blocks, key=_mask_key):
        events = sorted(_trace(masks, block))
        comps.append(tuple(Event(space, m) for m in events))
    comps.sort(key=lambda c: _mask_key(_support(c)))
    kinds = tuple(_classify(len(c)) for c in comps)
    return Decomposition(space, tuple(comps), kinds)


def _support(component: tuple[Event, ...]) -> int:
    mask = 0
    for e in component:
        mask |= e.mask
    return mask


def _mask_key(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def _partition_key(blocks: Iterable[int]) -> tuple:
    return tuple(sorted(_mask_key(b) for b in blocks))


def _validate_collection(collection: Sequence[Event]) -> tuple[StateSpace, list[int]]:
    if not collection:
        raise SuvoteError("decomposition needs a nonempty collection")
    space = collection[0].space
    masks = []
    for ev in collection:
        if ev.space != space:
            raise SuvoteError("collection events on mixed state spaces")
        if not ev:
            raise SuvoteError("collection events must be nonempty")
        if ev.mask in masks:
            raise SuvoteError("collection events must be distinct")
        masks.append(ev.mask)
    return space, masks


def _product_bipartition_ok(masks: Sequence[int], left: int, right: int) -> bool:
    t_left = _trace(masks, left)
    if 0 in t_left:
        return False
    t_right = _trace(masks, right)
    if 0 in t_right:
        return False
    return len(t_left) * len(t_right) == len(set(masks))


def _enumerate_product_partitions(masks: Sequence[int], supp: int,
                                  cache: dict[int, frozenset]) -> frozenset:
    """All partitions of `supp` whose traces multiply back to the collection."""
    if supp in cache:
        return cache[supp]
    results = {frozenset((supp,))}
    sub_masks = sorted(set(_trace(masks, supp)))
    low = supp & -supp
    rest = supp ^ low
    # enumerate blocks containing the lowest state to avoid mirrored splits
    sub = rest
    while True:
        left = low | sub
        right = supp ^ left
        if right and _product_bipartition_ok(sub_masks, left, right):
            for pl in _enumerate_product_partitions(sub_masks, left, cache):
                for pr in _enumerate_product_partitions(sub_masks, right, cache):
                    results.add(pl | pr)
        if sub == 0:
            break
        sub = (sub - 1) & rest
    out = frozenset(results)
    cache[supp] = out
    return out


def _select_canonical(space: StateSpace, masks: Sequence[int],
                      partitions: Iterable[frozenset]) -> Decomposition:
    best_blocks = None
    best_rank = None
    for blocks in partitions:
        trivial = sum(1 for b in blocks if len(_trace(masks, b)) == 1)
        if trivial > 1:
            continue
        rank = (-len(blocks), _partition_key(blocks))
        if best_rank is None or rank < best_rank:
            best_rank = rank
            best_blocks = blocks
    assert best_blocks is not None  # the one-block partition always qualifies
    return _blocks_to_decomposition(space, masks, best_blocks)


def maximal_decomposition(collection: Sequence[Event],
                          state_bound: int = 14) -> Decomposition:
    """Unique maximal decomposition of a collection of distinct nonempty events."""
    space, masks = _validate_collection(collection)
    supp = 0
    for m in masks:
        supp |= m
    if bin(supp).count("1") > state_bound:
        raise ResourceBudgetError("decomposition support exceeds the state bound")
    cache: dict[int, frozenset] = {}
    partitions = _enumerate_product_partitions(masks, supp, cache)
    return _select_canonical(space, masks, partitions)


def _set_partitions(items: list[int]):
    """All set partitions, standard recursive enumeration."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def brute_force_decomposition(collection: Sequence[Event],
                              max_states: int = 5, max_events: int = 16) -> Decomposition:
    """Oracle: enumerate every set partition of the ground set and check the
    decomposition equations directly (disjointness across components, product
    reconstruction, no empty trace, at most one forced component)."""
    space, masks = _validate_collection(collection)
    supp = 0
    for m in masks:
        supp |= m
    states = _mask_key(supp)
    if len(states) > max_states or len(masks) > max_events:
        raise ResourceBudgetError("brute-force decomposition bound exceeded")
    mask_set = set(masks)
    valid: list[frozenset] = []
    for part in _set_partitions(list(states)):
        blocks = [sum(1 << i for i in blk) for blk in part]
        traces = [sorted(_trace(masks, b)) for b in blocks]
        if any(0 in t for t in traces):
            continue  # an event misses a block: empty pick
        ok = True
        for (b1, t1), (b2, t2) in itertools.combinations(zip(blocks, traces), 2):
            for x in t1:
                for y in t2:
                    if x & y:
                        ok = False
        if not ok:
            continue
        unions = {sum(pick) for pick in itertools.product(*traces)}
        if unions != mask_set:
            continue
        valid.append(frozenset(blocks))
    return _select_canonical(space, masks, valid)


# ---------------------------------------------------------------------------
# top triples


def _repair_belief(space: StateSpace, constraints: list[tuple[int, int]],
                   rng: random.Random, randomize: bool,
                   max_rounds: int = 400) -> Belief | None:
    """Integer-weight repair: pump states of the losing side until every
    listed strict inequality holds, then normalize."""
    if randomize:
        weights = [rng.randint(1, 50) for _ in range(space.size)]
    else:
        weights = [1] * space.size

    def total(mask: int) -> int:
        return sum(w for i, w in enumerate(weights) if mask >> i & 1)

    for _ in range(max_rounds):
        broken = None
        for big, small in constraints:
            if total(big) <= total(small):
                broken = (big, small)
                break
        if broken is None:
            masses = [Fraction(w, sum(weights)) for w in weights]
            return Belief(space, masses)
        big, small = broken
        gain = big & ~small
        if not gain:
            return None  # big is a subset of small: unsatisfiable
        deficit = total(small) - total(big) + 1
        targets = _mask_key(gain)
        bump = rng.choice(targets) if randomize else targets[0]
        weights[bump] += deficit
    return None


def find_top_triple(collection: Sequence[Event], budget: int = 10_000,
                    seed: int = 0):
    """Search for three events and six beliefs realizing all six strict
    orderings of the triple above every other event of the collection.

    Requires a non-nested, richly decomposable collection. Returns
    (triple, beliefs) where beliefs maps each ordering of the three chosen
    indices to a verified Belief, or None once the budget is exhausted.
    """
    space, masks = _validate_collection(collection)
    if len(collection) < 3:
        raise SuvoteError("top-triple search needs at least three events")
    nested = check_non_nested(collection)
    if nested is not None:
        raise SuvoteError(f"collection is nested: {nested[0]} inside {nested[1]}")
    decomp = maximal_decomposition(collection)
    if not decomp.richly_decomposable:
        raise SuvoteError("collection is not richly decomposable")

    rich_masks = {e.mask for comp in decomp.rich_components() for e in comp}
    triples = list(itertools.combinations(range(len(collection)), 3))
    triples.sort(key=lambda t: (not all(masks[i] in rich_masks for i in t), t))

    rng = random.Random(seed)
    spent = 0
    for triple in triples:
        orderings = list(itertools.permutations(triple))
        found: dict[tuple[int, int, int], Belief] = {}
        for ordering in orderings:
            j, k, l = ordering
            constraints = [(masks[j], masks[k]), (masks[k], masks[l])]
            for idx, m in enumerate(masks):
                if idx not in triple:
                    constraints.append((masks[l], m))
            belief = None
            for attempt in range(40):
                if spent >= budget:
                    return None
                spent += 1
                belief = _repair_belief(space, constraints, rng, randomize=attempt > 0)
                if belief is not None:
                    break
            if belief is None:
                break
            for big, small in constraints:
                assert belief.prob_mask(big) > belief.prob_mask(small)
            found[ordering] = belief
        if len(found) == 6:
            return triple, found
    return None
