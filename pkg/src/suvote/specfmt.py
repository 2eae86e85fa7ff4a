"""Parser and serializer for the mechanism specification text format (.scf).

Line-oriented, '#' starts a comment, recursive descent with single-token
lookahead inside each line. Parse errors carry source locations and are a
separate stream from structural validation: `kbar=0` parses fine and is
rejected later by `validate_mechanism`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

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
from .mechanism import Cell, FeasibilityMap, Mechanism
from .model import Event, OutcomeSpace, StateSpace


@dataclass(frozen=True)
class ParseError:
    line: int
    column: int
    expected: str
    found: str

    def __str__(self) -> str:
        return (f"line {self.line}, column {self.column}: expected "
                f"{self.expected}, found {self.found!r}")


@dataclass
class ParseResult:
    mechanism: Mechanism | None
    errors: list[ParseError] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.mechanism is not None and not self.errors


_TOKEN_RE = re.compile(r"[A-Za-z0-9_]+|[:={}(),|\[\];]")


class _Line:
    """Token cursor over one source line."""

    def __init__(self, number: int, text: str):
        self.number = number
        self.tokens: list[tuple[str, int]] = []
        for match in _TOKEN_RE.finditer(text):
            self.tokens.append((match.group(), match.start() + 1))
        self.end_col = len(text) + 1
        self.pos = 0

    def peek(self) -> str | None:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][0]
        return None

    def col(self) -> int:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][1]
        return self.end_col

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise _Unexpected(self.number, self.end_col, "a token", "end of line")
        self.pos += 1
        return tok

    def expect(self, literal: str) -> None:
        tok = self.peek()
        if tok != literal:
            raise _Unexpected(self.number, self.col(), repr(literal),
                              tok if tok is not None else "end of line")
        self.pos += 1

    def expect_end(self) -> None:
        if self.peek() is not None:
            raise _Unexpected(self.number, self.col(), "end of line", self.peek())

    def number_token(self) -> int:
        tok = self.take()
        if not tok.isdigit():
            raise _Unexpected(self.number, self.tokens[self.pos - 1][1],
                              "an integer", tok)
        return int(tok)

    def ident(self, what: str = "a name") -> str:
        tok = self.take()
        if not re.fullmatch(r"[A-Za-z0-9_]+", tok):
            raise _Unexpected(self.number, self.tokens[self.pos - 1][1], what, tok)
        return tok


class _Unexpected(Exception):
    def __init__(self, line: int, column: int, expected: str, found: str):
        self.error = ParseError(line, column, expected, found)
        super().__init__(str(self.error))


class _Parser:
    def __init__(self, text: str):
        self.errors: list[ParseError] = []
        self.lines: list[_Line] = []
        for idx, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0]
            if body.strip():
                self.lines.append(_Line(idx, body))
        self.last_line = len(text.splitlines()) or 1
        self.space: StateSpace | None = None
        self.outcomes: OutcomeSpace | None = None
        self.feasible: dict[str, list[str]] = {}
        self.voters: int | None = None
        self.cells: dict[str, Event] = {}
        self.cell_order: list[str] = []
        self.factors: dict[str, object] = {}

    def fail(self, err: _Unexpected) -> None:
        self.errors.append(err.error)

    # -- helpers -------------------------------------------------------------

    def state_label(self, line: _Line) -> str:
        tok = line.ident("a state name")
        if self.space is None or tok not in self.space.labels:
            raise _Unexpected(line.number, line.tokens[line.pos - 1][1],
                              "a declared state", tok)
        return tok

    def outcome_label(self, line: _Line) -> str:
        tok = line.ident("an outcome name")
        if self.outcomes is None or tok not in self.outcomes.labels:
            raise _Unexpected(line.number, line.tokens[line.pos - 1][1],
                              "a declared outcome", tok)
        return tok

    def event(self, line: _Line) -> Event:
        line.expect("{")
        labels = []
        while line.peek() != "}":
            if line.peek() == ",":
                line.take()
                continue
            labels.append(self.state_label(line))
        line.expect("}")
        return self.space.event(labels)

    # -- line parsers ----------------------------------------------------------

    def parse(self) -> ParseResult:
        for line in self.lines:
            try:
                self.dispatch(line)
            except _Unexpected as err:
                self.fail(err)
            except SuvoteError as err:
                self.errors.append(ParseError(line.number, 1, "a well-formed line",
                                              str(err)))
        if self.voters is None and not self.errors:
            self.errors.append(ParseError(self.last_line, 1,
                                          "a 'voters:' line", "end of input"))
        if self.errors:
            return ParseResult(None, self.errors)
        return self.build()

    def dispatch(self, line: _Line) -> None:
        head = line.ident("a section keyword")
        if head == "states":
            line.expect(":")
            labels = []
            while line.peek() is not None:
                labels.append(line.ident("a state name"))
            self.space = StateSpace(tuple(labels))
        elif head == "outcomes":
            line.expect(":")
            labels = []
            while line.peek() is not None:
                labels.append(line.ident("an outcome name"))
            self.outcomes = OutcomeSpace(tuple(labels))
        elif head == "feasible":
            if self.space is None or self.outcomes is None:
                raise _Unexpected(line.number, line.col(),
                                  "states/outcomes before feasibility", head)
            state = self.state_label(line)
            line.expect(":")
            outs = []
            while line.peek() is not None:
                outs.append(self.outcome_label(line))
            self.feasible[state] = outs
        elif head == "voters":
            line.expect(":")
            self.voters = line.number_token()
            line.expect_end()
        elif head == "cell":
            if self.space is None:
                raise _Unexpected(line.number, line.col(),
                                  "a 'states:' line before cells", head)
            name = line.ident("a cell name")
            if name in self.cells:
                raise _Unexpected(line.number, line.col(), "a fresh cell name",
                                  name)
            line.expect(":")
            labels = []
            while line.peek() is not None:
                labels.append(self.state_label(line))
            self.cells[name] = self.space.event(labels)
            self.cell_order.append(name)
        elif head == "factor":
            name = line.ident("a cell name")
            if name not in self.cells:
                raise _Unexpected(line.number, line.tokens[line.pos - 1][1],
                                  "a declared cell", name)
            if name in self.factors:
                raise _Unexpected(line.number, line.tokens[line.pos - 1][1],
                                  "a cell without a factor yet", name)
            line.expect(":")
            self.factors[name] = self.factor(line, self.cells[name])
            line.expect_end()
        else:
            raise _Unexpected(line.number, line.tokens[0][1],
                              "one of states/outcomes/feasible/voters/cell/factor",
                              head)

    def keyvalue(self, line: _Line, key: str) -> None:
        line.expect(key)
        line.expect("=")

    def factor(self, line: _Line, cell: Event):
        kind = line.ident("a factor kind")
        if kind == "constant":
            self.keyvalue(line, "c")
            return ConstantFactor(cell, self.outcomes.index(self.outcome_label(line)))
        if kind == "simple":
            a, b = self.outcome_pair(line)
            self.keyvalue(line, "kbar")
            return SimpleFactor(cell, a, b, line.number_token())
        if kind == "quasidict":
            a, b = self.outcome_pair(line)
            self.keyvalue(line, "menu")
            menu = [self.event(line)]
            while line.peek() == "|":
                line.take()
                menu.append(self.event(line))
            return QuasiDictFactor(cell, a, b, tuple(menu))
        if kind == "dyadic":
            a, b = self.outcome_pair(line)
            self.keyvalue(line, "E")
            e = self.event(line)
            self.keyvalue(line, "F")
            f = self.event(line)
            self.keyvalue(line, "klo")
            k_lo = line.number_token()
            self.keyvalue(line, "khi")
            k_hi = line.number_token()
            self.keyvalue(line, "H")
            h = self.htable(line)
            return DyadicFactor(cell, a, b, e, f, k_lo, k_hi, h)
        if kind == "filtering":
            a, b = self.outcome_pair(line)
            self.keyvalue(line, "klo")
            k_lo = line.number_token()
            self.keyvalue(line, "khi")
            k_hi = line.number_token()
            levels = []
            quota_rows = []
            expected_k = k_lo
            while line.peek() == "level":
                line.take()
                k = line.number_token()
                if k != expected_k:
                    raise _Unexpected(line.number, line.tokens[line.pos - 1][1],
                                      f"level {expected_k}", str(k))
                expected_k += 1
                line.expect(":")
                self.keyvalue(line, "pairs")
                pairs = [self.event_pair(line)]
                while line.peek() == "|":
                    line.take()
                    pairs.append(self.event_pair(line))
                self.keyvalue(line, "Ga")
                g_a = self.event(line)
                self.keyvalue(line, "Gb")
                g_b = self.event(line)
                self.keyvalue(line, "quotas")
                quotas = [self.quota_pair(line)]
                while line.peek() == "|":
                    line.take()
                    quotas.append(self.quota_pair(line))
                levels.append(Dipartition(cell, tuple(pairs), (g_a, g_b)))
                quota_rows.append(tuple(quotas))
            if expected_k != k_hi + 1:
                raise _Unexpected(line.number, line.col(),
                                  f"level {expected_k}", line.peek() or "end of line")
            flt = FilterSeq(cell, k_lo, k_hi, tuple(levels))
            table = QuotaTable(k_lo, k_hi, tuple(quota_rows))
            return FilteringFactor(cell, a, b, flt, table)
        raise _Unexpected(line.number, line.tokens[line.pos - 1][1],
                          "constant/simple/quasidict/dyadic/filtering", kind)

    def outcome_pair(self, line: _Line) -> tuple[int, int]:
        self.keyvalue(line, "a")
        a = self.outcomes.index(self.outcome_label(line))
        self.keyvalue(line, "b")
        b = self.outcomes.index(self.outcome_label(line))
        return a, b

    def event_pair(self, line: _Line) -> tuple[Event, Event]:
        line.expect("(")
        e = self.event(line)
        line.expect(",")
        f = self.event(line)
        line.expect(")")
        return e, f

    def quota_pair(self, line: _Line) -> tuple[int, int]:
        line.expect("(")
        self.keyvalue(line, "ttilde")
        t_tilde = line.number_token()
        line.expect(",")
        self.keyvalue(line, "that")
        t_hat = line.number_token()
        line.expect(")")
        return t_tilde, t_hat

    def htable(self, line: _Line) -> HTable:
        tok = line.take()
        if tok == "threshold":
            line.expect("(")
            s = line.number_token()
            line.expect(")")
            return HTable(threshold=s)
        if tok == "table":
            line.expect("[")
            rows = [[]]
            while line.peek() != "]":
                nxt = line.take()
                if nxt == ";":
                    rows.append([])
                elif nxt.isdigit():
                    rows[-1].append(int(nxt))
                else:
                    raise _Unexpected(line.number, line.tokens[line.pos - 1][1],
                                      "a 0/1 entry or ';'", nxt)
            line.expect("]")
            return HTable(table=tuple(tuple(r) for r in rows))
        raise _Unexpected(line.number, line.tokens[line.pos - 1][1],
                          "threshold(...) or table[...]", tok)

    def build(self) -> ParseResult:
        errors: list[ParseError] = []
        if self.space is None:
            errors.append(ParseError(self.last_line, 1, "a 'states:' line",
                                     "end of input"))
        if self.outcomes is None:
            errors.append(ParseError(self.last_line, 1, "an 'outcomes:' line",
                                     "end of input"))
        for name in self.cell_order:
            if name not in self.factors:
                errors.append(ParseError(self.last_line, 1,
                                         f"a factor for cell {name}", "end of input"))
        if errors:
            return ParseResult(None, self.errors + errors)
        if self.feasible:
            table = {s: self.feasible.get(s, list(self.outcomes.labels))
                     for s in self.space.labels}
            feasibility = FeasibilityMap.from_labels(self.space, self.outcomes, table)
        else:
            feasibility = FeasibilityMap.unconstrained(self.space, self.outcomes)
        cells = tuple(Cell(name, self.factors[name]) for name in self.cell_order)
        mech = Mechanism(self.space, self.outcomes, feasibility, self.voters, cells)
        return ParseResult(mech, [])


def parse(text: str) -> ParseResult:
    """Parse mechanism text; syntax errors are collected, never raised."""
    try:
        return _Parser(text).parse()
    except _Unexpected as err:
        return ParseResult(None, [err.error])
    except Exception as err:  # defensive: arbitrary input must not crash callers
        return ParseResult(None, [ParseError(1, 1, "a well-formed document",
                                             f"{type(err).__name__}: {err}")])


def _event_text(ev: Event) -> str:
    return "{" + " ".join(ev.labels()) + "}"


def _factor_text(outcomes: OutcomeSpace, factor) -> str:
    labels = outcomes.labels
    if factor.kind == "constant":
        return f"constant c={labels[factor.c]}"
    head = f"a={labels[factor.a]} b={labels[factor.b]}"
    if factor.kind == "simple":
        return f"simple {head} kbar={factor.k_bar}"
    if factor.kind == "quasidict":
        menu = "|".join(_event_text(ev) for ev in factor.menu)
        return f"quasidict {head} menu={menu}"
    if factor.kind == "dyadic":
        if factor.h.threshold is not None:
            h = f"threshold({factor.h.threshold})"
        else:
            h = "table[" + "; ".join(" ".join(str(v) for v in row)
                                     for row in factor.h.table) + "]"
        return (f"dyadic {head} E={_event_text(factor.e)} F={_event_text(factor.f)} "
                f"klo={factor.k_lo} khi={factor.k_hi} H={h}")
    if factor.kind == "filtering":
        parts = [f"filtering {head} klo={factor.filter.k_lo} khi={factor.filter.k_hi}"]
        for k in range(factor.filter.k_lo, factor.filter.k_hi + 1):
            level = factor.filter.level(k)
            pairs = "|".join(f"({_event_text(e)},{_event_text(f)})"
                             for e, f in level.pairs)
            quotas = "|".join(
                f"(ttilde={t},that={h})"
                for t, h in factor.quotas.entries[k - factor.quotas.k_lo])
            parts.append(f"level {k}: pairs={pairs} Ga={_event_text(level.g_a)} "
                         f"Gb={_event_text(level.g_b)} quotas={quotas}")
        return " ".join(parts)
    raise SuvoteError(f"unknown factor kind {factor.kind!r}")


def serialize(mech: Mechanism) -> str:
    """Canonical text for a mechanism: declared label order, cells sorted by
    their lowest state, normalized whitespace. parse(serialize(m)) == m."""
    lines = [
        "states: " + " ".join(mech.space.labels),
        "outcomes: " + " ".join(mech.outcomes.labels),
    ]
    for s, label in enumerate(mech.space.labels):
        outs = [mech.outcomes.labels[x] for x in range(mech.outcomes.size)
                if x in mech.feasibility.available[s]]
        lines.append(f"feasible {label}: " + " ".join(outs))
    lines.append(f"voters: {mech.n}")
    cells = sorted(mech.cells, key=lambda c: c.event.mask & -c.event.mask)
    for cell in cells:
        lines.append(f"cell {cell.name}: " + " ".join(cell.event.labels()))
    for cell in cells:
        lines.append(f"factor {cell.name}: "
                     + _factor_text(mech.outcomes, cell.factor))
    return "\n".join(lines) + "\n"
