"""Right-censored observations: ingestion, ordering and tail extraction."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DomainError, ParseError

__all__ = ["ObservedUnit", "Population", "ingest_csv", "build_population", "tail"]

CSV_HEADER = ("time", "event")


@dataclass(frozen=True)
class ObservedUnit:
    """One subject's last observed age and failure marker.

    ``event`` is True for an observed failure and False for a right-censored
    unit. An age of exactly 0 is only meaningful for a censored unit that was
    never observed at all.
    """

    age: float
    event: bool

    def __post_init__(self):
        age = float(self.age)
        if not math.isfinite(age):
            raise DomainError(f"age must be finite, got {self.age!r}")
        if age < 0:
            raise DomainError(f"age must be non-negative, got {self.age!r}")
        if age == 0 and self.event:
            raise DomainError("a failure cannot be observed at age 0")
        object.__setattr__(self, "age", age)
        object.__setattr__(self, "event", bool(self.event))


def _order_key(unit: ObservedUnit):
    # failures sort before censorings at equal age
    return (unit.age, not unit.event)


@dataclass(frozen=True)
class Population:
    """Units in effective order: ascending age, failures first among ties.

    Construct through :func:`build_population` unless the units are already
    ordered; the constructor only validates the order.
    """

    units: tuple[ObservedUnit, ...] = ()

    def __post_init__(self):
        units = tuple(self.units)
        object.__setattr__(self, "units", units)
        for prev, cur in zip(units, units[1:]):
            if _order_key(cur) < _order_key(prev):
                raise DomainError(
                    "units are not in effective order; use build_population() to sort them"
                )

    @property
    def n(self) -> int:
        return len(self.units)

    @property
    def ages(self) -> np.ndarray:
        return np.array([u.age for u in self.units], dtype=float)

    @property
    def events(self) -> np.ndarray:
        return np.array([u.event for u in self.units], dtype=bool)

    def __len__(self) -> int:
        return len(self.units)

    def __iter__(self) -> Iterator[ObservedUnit]:
        return iter(self.units)

    def __getitem__(self, index):
        return self.units[index]

    @classmethod
    def from_arrays(cls, ages: Iterable[float], events: Iterable) -> "Population":
        """Build a population from parallel age and event sequences (any order)."""
        ages = list(ages)
        events = list(events)
        if len(ages) != len(events):
            raise DomainError(f"got {len(ages)} ages but {len(events)} event markers")
        return build_population(ObservedUnit(a, bool(e)) for a, e in zip(ages, events))


def build_population(units: Iterable[ObservedUnit]) -> Population:
    """Sort units into effective order.

    Ties in age are resolved as an ordering rule rather than by perturbing the
    stored ages: failures precede censorings, and units with equal age and
    marker keep their input order. This reproduces the usual Kaplan-Meier
    convention that deaths at ``t`` happen before censorings at ``t``.
    """
    return Population(tuple(sorted(units, key=_order_key)))


def tail(pop: Population, j: int) -> Population:
    """Units ``j+1 .. n`` of ``pop`` (``j`` is 1-based); ``tail(pop, n)`` is empty."""
    if not 1 <= j <= pop.n:
        raise IndexError(f"unit index {j} out of range 1..{pop.n}")
    return Population(pop.units[j:])


def _parse_event(raw: str, line: int) -> bool:
    if raw == "1":
        return True
    if raw == "0":
        return False
    raise ParseError(f"event must be 0 or 1, got {raw!r}", line)


def ingest_csv(text: str | io.TextIOBase) -> list[ObservedUnit]:
    """Parse ``time,event`` CSV text into units, preserving row order.

    Parameters
    ----------
    text : str or text stream
        UTF-8 content with header ``time,event``. Blank lines are ignored.

    Raises
    ------
    ParseError
        Missing header, wrong column count, non-numeric time or an event
        marker other than the literal ``0``/``1``.
    DomainError
        Negative or non-finite time, or a failure at time 0.
    """
    if not isinstance(text, str):
        text = text.read()
    text = text.lstrip("﻿")
    reader = csv.reader(io.StringIO(text, newline=""))
    units: list[ObservedUnit] = []
    header_seen = False
    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        cells = [cell.strip() for cell in row]
        if not header_seen:
            if tuple(cells) != CSV_HEADER:
                raise ParseError(f"expected header 'time,event', got {','.join(row)!r}", line)
            header_seen = True
            continue
        if len(cells) != 2:
            raise ParseError(f"expected 2 fields, got {len(cells)}", line)
        try:
            age = float(cells[0])
        except ValueError:
            raise ParseError(f"time is not a number: {cells[0]!r}", line) from None
        event = _parse_event(cells[1], line)
        if not math.isfinite(age):
            raise DomainError(f"time must be finite, got {cells[0]!r}", line)
        if age < 0:
            raise DomainError(f"time must be non-negative, got {cells[0]!r}", line)
        try:
            units.append(ObservedUnit(age, event))
        except DomainError as exc:
            raise DomainError(str(exc), line) from None
    if not header_seen:
        raise ParseError("missing header 'time,event'", 1)
    return units


def format_csv(units: Sequence[ObservedUnit]) -> str:
    """Serialize units in the ``time,event`` input format."""
    lines = [",".join(CSV_HEADER)]
    lines.extend(f"{u.age:.12g},{int(u.event)}" for u in units)
    return "\n".join(lines) + "\n"
