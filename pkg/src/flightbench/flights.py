"""Flight records, JSON ingestion, and the seeded synthetic pool generator.

Record layout (one JSON object per flight):

    {"airline": str, "ticket_class": "economy"|"business"|"first",
     "travel_date": "YYYY-MM-DD", "departure_time": "HH:MM",
     "arrival_time": "HH:MM", "arrival_day_offset": int,
     "total_travel_time_minutes": int, "num_layovers": int,
     "layover_locations": [IATA str], "layover_times_minutes": [int],
     "price_usd": int, "emission_diff_pct": number}

Live scraping is out of scope; `synthesize_flights` produces seeded pools
with the same shape, and `import_flights` ingests externally scraped
arrays of such records.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
import re
from dataclasses import dataclass
from datetime import date, timedelta
from typing import Iterable, Sequence

from .errors import FlightbenchError

log = logging.getLogger(__name__)

TICKET_CLASSES = ("economy", "business", "first")

# All synthetic travel dates must fall strictly after this epoch; it is a
# fixed constant (not "today") so that generation is reproducible.
GENERATION_EPOCH = date(2024, 1, 1)


class ParseError(FlightbenchError):
    pass


class SchemaViolation(FlightbenchError):
    def __init__(self, record_index: int, field: str, reason: str):
        super().__init__(f"record {record_index}, field {field!r}: {reason}")
        self.record_index = record_index
        self.field = field
        self.reason = reason


class CountTooSmall(FlightbenchError):
    pass


class EmptyPool(FlightbenchError):
    pass


@dataclass(frozen=True)
class Airport:
    iata_code: str
    city: str

    def __post_init__(self) -> None:
        if not re.fullmatch(r"[A-Z]{3}", self.iata_code):
            raise ValueError(f"bad IATA code {self.iata_code!r}")


# Fifty busiest airports by passenger traffic; the synthetic stand-in for
# the scraped route endpoints and layover stops.
AIRPORTS: tuple[Airport, ...] = tuple(
    Airport(code, city)
    for code, city in [
        ("ATL", "Atlanta"), ("DXB", "Dubai"), ("DFW", "Dallas-Fort Worth"),
        ("LHR", "London"), ("HND", "Tokyo"), ("DEN", "Denver"),
        ("IST", "Istanbul"), ("LAX", "Los Angeles"), ("CDG", "Paris"),
        ("ORD", "Chicago"), ("DEL", "New Delhi"), ("PVG", "Shanghai"),
        ("CAN", "Guangzhou"), ("ICN", "Seoul"), ("SIN", "Singapore"),
        ("AMS", "Amsterdam"), ("MAD", "Madrid"), ("JFK", "New York"),
        ("LAS", "Las Vegas"), ("CTU", "Chengdu"), ("MIA", "Miami"),
        ("PEK", "Beijing"), ("SZX", "Shenzhen"), ("FRA", "Frankfurt"),
        ("MCO", "Orlando"), ("BKK", "Bangkok"), ("CLT", "Charlotte"),
        ("SEA", "Seattle"), ("MEX", "Mexico City"), ("EWR", "Newark"),
        ("PHX", "Phoenix"), ("IAH", "Houston"), ("BCN", "Barcelona"),
        ("HKG", "Hong Kong"), ("KUL", "Kuala Lumpur"), ("SFO", "San Francisco"),
        ("CGK", "Jakarta"), ("MUC", "Munich"), ("YYZ", "Toronto"),
        ("FCO", "Rome"), ("BOM", "Mumbai"), ("GRU", "Sao Paulo"),
        ("MNL", "Manila"), ("NRT", "Tokyo Narita"), ("SYD", "Sydney"),
        ("DOH", "Doha"), ("JED", "Jeddah"), ("SAW", "Istanbul Sabiha"),
        ("BOS", "Boston"), ("LGW", "London Gatwick"),
    ]
)
AIRPORT_BY_CODE = {a.iata_code: a for a in AIRPORTS}

AIRLINES: tuple[str, ...] = (
    "British Airways", "Air France", "Lufthansa", "Delta", "United",
    "American Airlines", "Emirates", "Qatar Airways", "Singapore Airlines",
    "KLM", "Turkish Airlines", "Aeromexico", "ANA", "Japan Airlines",
    "Qantas", "Iberia", "Swiss", "Cathay Pacific", "Etihad Airways",
    "Air Canada",
)


@dataclass(frozen=True)
class FlightOption:
    """One bookable flight; times are integer minutes, price whole dollars."""

    airline: str
    ticket_class: str
    travel_date: date
    departure_time: int  # minutes since local midnight, [0, 1440)
    arrival_time: int  # minutes since local midnight, [0, 1440)
    arrival_day_offset: int
    total_travel_time: int  # minutes
    num_layovers: int
    layover_locations: tuple[Airport, ...]
    layover_times: tuple[int, ...]  # minutes, one per layover
    price: int  # US dollars
    emission_diff_pct: float  # signed percent difference from route average

    def __post_init__(self) -> None:
        if self.ticket_class not in TICKET_CLASSES:
            raise ValueError(f"bad ticket class {self.ticket_class!r}")
        if not 0 <= self.departure_time < 1440:
            raise ValueError("departure_time outside [0, 1440)")
        if not 0 <= self.arrival_time < 1440:
            raise ValueError("arrival_time outside [0, 1440)")
        if self.arrival_day_offset < 0:
            raise ValueError("arrival_day_offset negative")
        if self.total_travel_time <= 0:
            raise ValueError("total_travel_time must be positive")
        if self.num_layovers < 0:
            raise ValueError("num_layovers negative")
        if len(self.layover_locations) != self.num_layovers:
            raise ValueError("layover_locations length != num_layovers")
        if len(self.layover_times) != self.num_layovers:
            raise ValueError("layover_times length != num_layovers")
        if any(t <= 0 for t in self.layover_times):
            raise ValueError("layover times must be positive")
        if self.total_travel_time < sum(self.layover_times):
            raise ValueError("total_travel_time shorter than layovers")
        if self.price <= 0:
            raise ValueError("price must be positive")


@dataclass(frozen=True)
class RouteContext:
    """One route search: endpoints, date, and the candidate flight pool."""

    source: Airport
    destination: Airport
    travel_date: date
    pool: tuple[FlightOption, ...]

    def __post_init__(self) -> None:
        if self.source == self.destination:
            raise ValueError("source equals destination")
        for f in self.pool:
            if f.travel_date != self.travel_date:
                raise ValueError("pool flight date differs from route date")


# --- formatting helpers (shared with constraint templates) ------------------


def format_clock(minutes: int) -> str:
    h, m = divmod(minutes, 60)
    meridiem = "am" if h < 12 else "pm"
    h12 = h % 12 or 12
    return f"{h12}:{m:02d} {meridiem}"


def format_duration(minutes: int) -> str:
    h, m = divmod(minutes, 60)
    hours = f"{h} hour" + ("s" if h != 1 else "")
    mins = f"{m} minute" + ("s" if m != 1 else "")
    if h and m:
        return f"{hours} and {mins}"
    return hours if h else mins


def format_money(dollars: int) -> str:
    return f"${dollars}"


def _hhmm(minutes: int) -> str:
    return f"{minutes // 60:02d}:{minutes % 60:02d}"


def _parse_hhmm(text: str) -> int:
    m = re.fullmatch(r"(\d{1,2}):(\d{2})", text)
    if not m:
        raise ValueError(f"bad time {text!r}, expected HH:MM")
    minutes = int(m.group(1)) * 60 + int(m.group(2))
    if not 0 <= minutes < 1440:
        raise ValueError(f"time {text!r} outside 00:00-23:59")
    return minutes


def render_option(f: FlightOption) -> str:
    """Plain-text rendering of one option as shown to a model."""
    arrival = format_clock(f.arrival_time)
    if f.arrival_day_offset == 1:
        arrival += " (+1 day)"
    elif f.arrival_day_offset > 1:
        arrival += f" (+{f.arrival_day_offset} days)"
    parts = [
        f"Airline: {f.airline}.",
        f"Ticket class: {f.ticket_class}.",
        f"Travel date: {f.travel_date.isoformat()}.",
        f"Departure time: {format_clock(f.departure_time)}.",
        f"Arrival time: {arrival}.",
        f"Total travel time: {format_duration(f.total_travel_time)}.",
        f"Number of layovers: {f.num_layovers}.",
    ]
    if f.num_layovers:
        codes = ", ".join(a.iata_code for a in f.layover_locations)
        times = ", ".join(format_duration(t) for t in f.layover_times)
        parts.append(f"Layover locations: {codes}.")
        parts.append(f"Layover times: {times}.")
    parts.append(f"Price: {format_money(f.price)}.")
    if f.emission_diff_pct > 0:
        parts.append(f"Carbon emissions: {f.emission_diff_pct}% above route average.")
    elif f.emission_diff_pct < 0:
        parts.append(f"Carbon emissions: {abs(f.emission_diff_pct)}% below route average.")
    else:
        parts.append("Carbon emissions: at route average.")
    return " ".join(parts)


# --- JSON codec --------------------------------------------------------------

_KNOWN_FIELDS = {
    "airline", "ticket_class", "travel_date", "departure_time", "arrival_time",
    "arrival_day_offset", "total_travel_time_minutes", "num_layovers",
    "layover_locations", "layover_times_minutes", "price_usd", "emission_diff_pct",
}


def flight_to_record(f: FlightOption) -> dict:
    return {
        "airline": f.airline,
        "ticket_class": f.ticket_class,
        "travel_date": f.travel_date.isoformat(),
        "departure_time": _hhmm(f.departure_time),
        "arrival_time": _hhmm(f.arrival_time),
        "arrival_day_offset": f.arrival_day_offset,
        "total_travel_time_minutes": f.total_travel_time,
        "num_layovers": f.num_layovers,
        "layover_locations": [a.iata_code for a in f.layover_locations],
        "layover_times_minutes": list(f.layover_times),
        "price_usd": f.price,
        "emission_diff_pct": f.emission_diff_pct,
    }


def _airport_for(code: str) -> Airport:
    if code in AIRPORT_BY_CODE:
        return AIRPORT_BY_CODE[code]
    return Airport(code, code)  # unknown but well-formed codes round-trip


def flight_from_record(record: dict, index: int = 0, epoch: date = GENERATION_EPOCH) -> FlightOption:
    if not isinstance(record, dict):
        raise SchemaViolation(index, "<record>", "expected a JSON object")

    def need(field: str, kinds) -> object:
        if field not in record:
            raise SchemaViolation(index, field, "missing")
        value = record[field]
        if not isinstance(value, kinds) or isinstance(value, bool):
            raise SchemaViolation(index, field, f"expected {kinds}, got {type(value).__name__}")
        return value

    for field in record:
        if field not in _KNOWN_FIELDS:
            log.warning("record %d: field %r unrecognized, ignored", index, field)

    try:
        travel_date = date.fromisoformat(str(need("travel_date", str)))
    except ValueError as exc:
        raise SchemaViolation(index, "travel_date", str(exc)) from None
    if travel_date <= epoch:
        raise SchemaViolation(index, "travel_date", f"{travel_date} not after epoch {epoch}")

    try:
        departure = _parse_hhmm(str(need("departure_time", str)))
        arrival = _parse_hhmm(str(need("arrival_time", str)))
    except ValueError as exc:
        raise SchemaViolation(index, "departure_time/arrival_time", str(exc)) from None

    locations_raw = need("layover_locations", list)
    times_raw = need("layover_times_minutes", list)
    try:
        locations = tuple(_airport_for(str(code)) for code in locations_raw)
    except ValueError as exc:
        raise SchemaViolation(index, "layover_locations", str(exc)) from None
    if not all(isinstance(t, int) and not isinstance(t, bool) for t in times_raw):
        raise SchemaViolation(index, "layover_times_minutes", "expected integers")

    try:
        return FlightOption(
            airline=str(need("airline", str)),
            ticket_class=str(need("ticket_class", str)),
            travel_date=travel_date,
            departure_time=departure,
            arrival_time=arrival,
            arrival_day_offset=int(need("arrival_day_offset", int)),
            total_travel_time=int(need("total_travel_time_minutes", int)),
            num_layovers=int(need("num_layovers", int)),
            layover_locations=locations,
            layover_times=tuple(int(t) for t in times_raw),
            price=int(need("price_usd", int)),
            emission_diff_pct=float(need("emission_diff_pct", (int, float))),
        )
    except ValueError as exc:
        raise SchemaViolation(index, "<invariants>", str(exc)) from None


def import_flights(document: str, epoch: date = GENERATION_EPOCH) -> list[FlightOption]:
    """Parse and validate a JSON array of flight records, order preserved."""
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from None
    if not isinstance(data, list):
        raise ParseError("expected a JSON array of flight records")
    return [flight_from_record(record, i, epoch) for i, record in enumerate(data)]


def serialize_flights(flights: Iterable[FlightOption]) -> str:
    return json.dumps([flight_to_record(f) for f in flights], indent=2)


# --- synthetic pools ---------------------------------------------------------


def _route_base_minutes(source: Airport, destination: Airport) -> int:
    """Deterministic nonstop duration for a route, 90 minutes to 15 hours."""
    digest = hashlib.sha256(f"{source.iata_code}-{destination.iata_code}".encode()).digest()
    return 90 + int.from_bytes(digest[:4], "big") % 811


_PRICE_RANGES = {"economy": (120, 1200), "business": (900, 4800), "first": (2400, 12000)}
_CLASS_WEIGHTS = (0.5, 0.3, 0.2)


def synthesize_flights(
    source: Airport,
    destination: Airport,
    travel_date: date,
    count: int,
    seed: int,
    epoch: date = GENERATION_EPOCH,
) -> list[FlightOption]:
    """Seeded pool of `count` flights spanning all three ticket classes."""
    if count < 5:
        raise CountTooSmall(f"need at least 5 flights per pool, got {count}")
    if source == destination:
        raise ValueError("source equals destination")
    if travel_date <= epoch:
        raise ValueError(f"travel date {travel_date} not after epoch {epoch}")
    rng = random.Random(seed)
    base = _route_base_minutes(source, destination)

    classes = list(TICKET_CLASSES) + rng.choices(TICKET_CLASSES, weights=_CLASS_WEIGHTS, k=count - 3)
    rng.shuffle(classes)

    stop_pool = [a for a in AIRPORTS if a not in (source, destination)]
    drafts = []
    raw_emissions = []
    for ticket_class in classes:
        num_layovers = rng.choices((0, 1, 2, 3), weights=(0.3, 0.4, 0.2, 0.1))[0]
        layovers = tuple(rng.sample(stop_pool, num_layovers))
        layover_times = tuple(rng.randrange(30, 245, 5) for _ in range(num_layovers))
        air_minutes = int(base * rng.uniform(0.85, 1.3))
        total = air_minutes + sum(layover_times)
        departure = rng.randrange(0, 1440, 5)
        lo, hi = _PRICE_RANGES[ticket_class]
        drafts.append(
            dict(
                airline=rng.choice(AIRLINES),
                ticket_class=ticket_class,
                travel_date=travel_date,
                departure_time=departure,
                arrival_time=(departure + total) % 1440,
                arrival_day_offset=(departure + total) // 1440,
                total_travel_time=total,
                num_layovers=num_layovers,
                layover_locations=layovers,
                layover_times=layover_times,
                price=rng.randint(lo, hi) // 10 * 10,
            )
        )
        raw_emissions.append(rng.gauss(0.0, 10.0))

    mean = sum(raw_emissions) / len(raw_emissions)
    return [
        FlightOption(emission_diff_pct=round(raw - mean, 1), **draft)
        for draft, raw in zip(drafts, raw_emissions)
    ]


def make_route_context(
    source: Airport,
    destination: Airport,
    travel_date: date,
    count: int,
    seed: int,
    epoch: date = GENERATION_EPOCH,
) -> RouteContext:
    pool = synthesize_flights(source, destination, travel_date, count, seed, epoch)
    return RouteContext(source, destination, travel_date, tuple(pool))


def route_average_checks(pool: Sequence[FlightOption]) -> dict:
    """Preflight diagnostics: class counts, price range, emission mean."""
    if not pool:
        raise EmptyPool("cannot analyze an empty pool")
    prices = [f.price for f in pool]
    return {
        "economy": sum(1 for f in pool if f.ticket_class == "economy"),
        "business": sum(1 for f in pool if f.ticket_class == "business"),
        "first": sum(1 for f in pool if f.ticket_class == "first"),
        "min_price": min(prices),
        "max_price": max(prices),
        "emission_mean": sum(f.emission_diff_pct for f in pool) / len(pool),
    }
