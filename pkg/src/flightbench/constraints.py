"""Per-slot rule systems that impose concrete constraints on flights.

Each draw yields a positive/negated pair of primitives over one slot;
thresholds come from pool statistics so the constraint has a chance of
splitting the candidate flights.  Rendering is template-driven and the
full catalog is exported with dataset manifests for auditability.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from datetime import date, timedelta
from typing import Sequence

from .errors import FlightbenchError
from .flights import (
    AIRLINES,
    AIRPORT_BY_CODE,
    AIRPORTS,
    TICKET_CLASSES,
    FlightOption,
    RouteContext,
    format_clock,
    format_duration,
    format_money,
)
from .logic import Slot


class Relation(str, Enum := __import__("enum").Enum):  # noqa: F821
    pass
