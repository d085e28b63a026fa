"""Boolean skeletons of user requirements.

A requirement starts life as a minterm table over a handful of flight
attributes ("slots") and is compiled into the smallest product-of-sums
expression consistent with that table.  Minimization runs Quine-McCluskey
on the complement function (whose prime implicants are the prime
implicates of the original) followed by an exact minimum-cover search;
ties are broken by total literal count and then by the canonical
serialization, so the output is fully deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence

from .errors import FlightbenchError


class Slot(Enum):
    """The closed set of flight attributes, in canonical order."""

    AIRLINE = "airline"
    TICKET_CLASS = "ticket_class"
    DEPARTURE_TIME = "departure_time"
    ARRIVAL_TIME = "arrival_time"
    TOTAL_TRAVEL_TIME = "total_travel_time"
    NUM_LAYOVERS = "num_layovers"
    EMISSION_DIFF = "emission_diff"
    TRAVEL_DATE = "travel_date"
    PRICE = "price"
    LAYOVER_LOCATIONS = "layover_locations"
    LAYOVER_TIMES = "layover_times"

    @property
    def index(self) -> int:
        return _SLOT_INDEX[self]

    def __repr__(self) -> str:  # keeps test diffs readable
        return f"Slot.{self.name}"


SLOT_ORDER: tuple[Slot, ...] = tuple(Slot)
_SLOT_INDEX = {slot: i for i, slot in enumerate(SLOT_ORDER)}
_SLOT_BY_NAME = {slot.value: slot for slot in SLOT_ORDER}

# One row of a truth table: a 0/1 bit per selected slot, in slot order.
Assignment = tuple[int, ...]


class MalformedTable(FlightbenchError):
    pass


class ArityMismatch(FlightbenchError):
    pass


class TooManySlots(FlightbenchError):
    pass


class PosSyntaxError(FlightbenchError):
    pass


def slot_from_name(name: str) -> Slot:
    try:
        return _SLOT_BY_NAME[name]
    except KeyError:
        raise PosSyntaxError(f"unknown slot name {name!r}") from None


@dataclass(frozen=True)
class MintermTable:
    """Truth rows of a non-constant boolean function over selected slots.

    Accepts 1-10 slots; the 2-6 window used for query generation is
    enforced by the generator, not here.
    """

    slots: tuple[Slot, ...]
    minterms: frozenset[Assignment]

    def __init__(self, slots: Sequence[Slot], minterms: Iterable[Sequence[int]]):
        slots = tuple(slots)
        if not 1 <= len(slots) <= 10:
            raise MalformedTable(f"slot count {len(slots)} outside 1-10")
        if len(set(slots)) != len(slots):
            raise MalformedTable("duplicate slots")
        rows = [tuple(int(b) for b in row) for row in minterms]
        for row in rows:
            if len(row) != len(slots):
                raise MalformedTable(f"row {row} has arity {len(row)}, expected {len(slots)}")
            if any(b not in (0, 1) for b in row):
                raise MalformedTable(f"row {row} contains non-binary values")
        if len(set(rows)) != len(rows):
            raise MalformedTable("duplicate minterm rows")
        if not rows:
            raise MalformedTable("empty minterm set (constant-false function)")
        if len(rows) >= 2 ** len(slots):
            raise MalformedTable("full minterm set (constant-true function)")
        object.__setattr__(self, "slots", slots)
        object.__setattr__(self, "minterms", frozenset(rows))


@dataclass(frozen=True)
class Literal:
    slot: Slot
    negated: bool
    occurrence_id: int

    def sort_key(self) -> tuple[int, bool]:
        return (self.slot.index, self.negated)


@dataclass(frozen=True)
class SumTerm:
    literals: tuple[Literal, ...]

    def __post_init__(self) -> None:
        if not self.literals:
            raise PosSyntaxError("empty sum term")
        slots = [lit.slot for lit in self.literals]
        if len(set(slots)) != len(slots):
            raise PosSyntaxError("slot appears twice in one sum term")

    def sort_key(self) -> tuple[tuple[int, bool], ...]:
        return tuple(lit.sort_key() for lit in self.literals)


@dataclass(frozen=True)
class PosExpression:
    """AND over sum terms of OR over literals.  Empty = constant true."""

    terms: tuple[SumTerm, ...]

    def __post_init__(self) -> None:
        ids = [lit.occurrence_id for lit in self.literals()]
        if sorted(ids) != list(range(len(ids))):
            raise PosSyntaxError("occurrence ids must be distinct and contiguous from 0")

    def literals(self) -> Iterator[Literal]:
        for term in self.terms:
            yield from term.literals

    def slots(self) -> set[Slot]:
        return {lit.slot for lit in self.literals()}


def eval_pos(expr: PosExpression, assignment: Sequence[int], slots: Sequence[Slot]) -> bool:
    """Standard POS semantics over the given bit assignment."""
    if len(assignment) != len(slots):
        raise ArityMismatch(f"{len(assignment)} bits for {len(slots)} slots")
    bit = {slot: int(b) for slot, b in zip(slots, assignment)}
    for term in expr.terms:
        for lit in term.literals:
            if lit.slot not in bit:
                raise ArityMismatch(f"assignment does not cover slot {lit.slot.value}")
        if not any(bit[lit.slot] ^ lit.negated for lit in term.literals):
            return False
    return True


def enumerate_satisfying(expr: PosExpression, slots: Sequence[Slot]) -> frozenset[Assignment]:
    """Exhaustively enumerate satisfying assignments over the given slots."""
    if len(slots) > 20:
        raise TooManySlots(f"{len(slots)} slots exceeds the enumeration limit of 20")
    return frozenset(
        a for a in itertools.product((0, 1), repeat=len(slots)) if eval_pos(expr, a, slots)
    )


# --- Quine-McCluskey on the complement + exact minimum cover ---------------
#
# Cubes are tuples over {0, 1, 2}; 2 marks a free position.  A prime
# implicant of the complement maps to a sum term of the original by
# De Morgan: cube value 1 -> negated literal, 0 -> plain literal.


def _mergeable(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    diff = 0
    for x, y in zip(a, b):
        if x != y:
            if x == 2 or y == 2:
                return False
            diff += 1
            if diff > 1:
                return False
    return diff == 1


def _merge(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(2 if x != y else x for x, y in zip(a, b))


def _covers(cube: tuple[int, ...], row: tuple[int, ...]) -> bool:
    return all(c == 2 or c == r for c, r in zip(cube, row))


def _prime_cubes(rows: Sequence[tuple[int, ...]]) -> list[tuple[int, ...]]:
    level = set(rows)
    primes: set[tuple[int, ...]] = set()
    while level:
        by_ones: dict[int, list[tuple[int, ...]]] = {}
        for cube in sorted(level):
            by_ones.setdefault(sum(1 for v in cube if v == 1), []).append(cube)
        used: set[tuple[int, ...]] = set()
        nxt: set[tuple[int, ...]] = set()
        for ones, group in sorted(by_ones.items()):
            for a in group:
                for b in by_ones.get(ones + 1, ()):
                    if _mergeable(a, b):
                        nxt.add(_merge(a, b))
                        used.add(a)
                        used.add(b)
        primes.update(c for c in level if c not in used)
        level = nxt
    return sorted(primes)


def _min_covers(prime_masks: Sequence[int], full_mask: int) -> list[tuple[int, ...]]:
    """All minimum-cardinality covers, as tuples of prime indices.

    Row-driven DFS with iterative deepening; a failure memo on the
    uncovered-row mask keeps the search tractable for every function on
    up to ~10 variables that this package ever sees.
    """
    nbits = full_mask.bit_length()
    row_candidates: list[list[int]] = []
    for r in range(nbits):
        cand = [j for j, m in enumerate(prime_masks) if m >> r & 1]
        row_candidates.append(cand)

    def pick_row(uncovered: int) -> int:
        best, best_n = -1, 1 << 30
        for r in range(nbits):
            if uncovered >> r & 1:
                n = len(row_candidates[r])
                if n < best_n:
                    best, best_n = r, n
        return best

    solutions: set[frozenset[int]] = set()
    failed_at: dict[int, int] = {}

    def search(uncovered: int, depth_left: int, chosen: list[int], collect: bool) -> bool:
        if uncovered == 0:
            if collect:
                solutions.add(frozenset(chosen))
            return True
        if depth_left == 0 or failed_at.get(uncovered, -1) >= depth_left:
            return False
        row = pick_row(uncovered)
        found = False
        for j in row_candidates[row]:
            chosen.append(j)
            if search(uncovered & ~prime_masks[j], depth_left - 1, chosen, collect):
                found = True
                if not collect:
                    chosen.pop()
                    return True
            chosen.pop()
        if not found:
            failed_at[uncovered] = depth_left
        return found

    for depth in range(1, len(prime_masks) + 1):
        if search(full_mask, depth, [], collect=False):
            failed_at.clear()
            search(full_mask, depth, [], collect=True)
            break
    return [tuple(sorted(sol)) for sol in sorted(solutions, key=sorted)]


def _cube_literal_keys(cube: tuple[int, ...], slots: Sequence[Slot]) -> tuple[tuple[int, bool], ...]:
    keys = [(slots[i].index, v == 1) for i, v in enumerate(cube) if v != 2]
    return tuple(sorted(keys))


def minimize_pos(table: MintermTable) -> PosExpression:
    """Smallest POS expression consistent with the minterm table.

    Minimum sum-term count first, then fewest literals, then the
    lexicographically least canonical form.
    """
    n = len(table.slots)
    zero_rows = sorted(set(itertools.product((0, 1), repeat=n)) - table.minterms)
    row_bit = {row: i for i, row in enumerate(zero_rows)}
    primes = _prime_cubes(zero_rows)
    prime_masks = [
        sum(1 << row_bit[row] for row in zero_rows if _covers(cube, row)) for cube in primes
    ]
    full_mask = (1 << len(zero_rows)) - 1
    covers = _min_covers(prime_masks, full_mask)

    def cover_key(cover: tuple[int, ...]) -> tuple[int, tuple]:
        term_keys = sorted(_cube_literal_keys(primes[j], table.slots) for j in cover)
        return (sum(len(k) for k in term_keys), tuple(term_keys))

    best = min(covers, key=cover_key)
    term_keys = sorted(_cube_literal_keys(primes[j], table.slots) for j in best)
    terms = []
    occurrence = 0
    for keys in term_keys:
        literals = []
        for slot_index, negated in keys:
            literals.append(Literal(SLOT_ORDER[slot_index], negated, occurrence))
            occurrence += 1
        terms.append(SumTerm(tuple(literals)))
    return PosExpression(tuple(terms))


# --- canonical text form ----------------------------------------------------


def pos_to_text(expr: PosExpression) -> str:
    """Render e.g. "(price | ~ticket_class) & (departure_time)"."""
    parts = []
    for term in expr.terms:
        lits = " | ".join(("~" if lit.negated else "") + lit.slot.value for lit in term.literals)
        parts.append(f"({lits})")
    return " & ".join(parts)


def pos_from_text(text: str) -> PosExpression:
    """Parse the canonical form, numbering occurrences left to right."""
    text = text.strip()
    if not text:
        return PosExpression(())
    terms = []
    occurrence = 0
    for chunk in text.split(" & "):
        chunk = chunk.strip()
        if not (chunk.startswith("(") and chunk.endswith(")")):
            raise PosSyntaxError(f"malformed sum term {chunk!r}")
        literals = []
        for token in chunk[1:-1].split(" | "):
            token = token.strip()
            if not token:
                raise PosSyntaxError(f"empty literal in {chunk!r}")
            negated = token.startswith("~")
            literals.append(Literal(slot_from_name(token.lstrip("~")), negated, occurrence))
            occurrence += 1
        terms.append(SumTerm(tuple(literals)))
    return PosExpression(tuple(terms))
