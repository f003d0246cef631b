"""Shared domain vocabulary: privilege lattice and vulnerability records.

The privilege lattice has five elements.  NONE is bottom, OS(ADMIN) is top,
and the two application levels sit below OS(ADMIN) on a separate chain from
OS(USER):

    NONE < APP(USER) < APP(ADMIN) < OS(ADMIN)
    NONE < OS(USER) < OS(ADMIN)

APP(USER)/APP(ADMIN) are incomparable with OS(USER).  Operating-system admin
subsumes any application privilege.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from icsgraph.errors import SchemaViolation

FALLBACK = "FALLBACK"

_CVE_ID_RE = re.compile(r"^(CVE|XVE)-\d{4}-\d{4,}$|^XVE-[A-Z0-9][A-Z0-9-]*$")


class PrivilegeLevel(Enum):
    """Privilege category an attacker can hold on a node.

    Values are the exact strings used in all JSON/CSV outputs.
    """

    NONE = "NONE"
    APP_USER = "APP(USER)"
    APP_ADMIN = "APP(ADMIN)"
    OS_USER = "OS(USER)"
    OS_ADMIN = "OS(ADMIN)"

    def __repr__(self) -> str:  # kept short for test diffs
        return f"PrivilegeLevel.{self.name}"

    @classmethod
    def parse(cls, text: str) -> "PrivilegeLevel":
        """Accept either the wire form (``OS(ADMIN)``) or the enum name (``OS_ADMIN``)."""
        for level in cls:
            if text == level.value or text == level.name:
                return level
        raise SchemaViolation(f"unknown privilege level: {text!r}")


_P = PrivilegeLevel

# Strict < pairs, transitively closed from the Hasse diagram above.
_LT: frozenset[tuple[PrivilegeLevel, PrivilegeLevel]] = frozenset(
    {
        (_P.NONE, _P.APP_USER),
        (_P.NONE, _P.APP_ADMIN),
        (_P.NONE, _P.OS_USER),
        (_P.NONE, _P.OS_ADMIN),
        (_P.APP_USER, _P.APP_ADMIN),
        (_P.APP_USER, _P.OS_ADMIN),
        (_P.APP_ADMIN, _P.OS_ADMIN),
        (_P.OS_USER, _P.OS_ADMIN),
    }
)


def satisfies(held: PrivilegeLevel, required: PrivilegeLevel) -> bool:
    """True iff ``required`` <= ``held`` in the privilege lattice."""
    return held is required or (required, held) in _LT


def _upper_bounds(a: PrivilegeLevel, b: PrivilegeLevel) -> list[PrivilegeLevel]:
    return [x for x in PrivilegeLevel if satisfies(x, a) and satisfies(x, b)]


def join(a: PrivilegeLevel, b: PrivilegeLevel) -> PrivilegeLevel:
    """Least upper bound of two privilege levels."""
    return _JOIN[a, b]


# The least upper bound is unique for every pair in this lattice; computed
# once so join() is a table lookup.
_JOIN: dict[tuple[PrivilegeLevel, PrivilegeLevel], PrivilegeLevel] = {}
for _a in PrivilegeLevel:
    for _b in PrivilegeLevel:
        _ubs = _upper_bounds(_a, _b)
        _least = [x for x in _ubs if all(satisfies(y, x) for y in _ubs)]
        assert len(_least) == 1, f"lattice is not a join-semilattice at ({_a}, {_b})"
        _JOIN[_a, _b] = _least[0]
del _a, _b, _ubs, _least


@dataclass(frozen=True)
class VulnRecord:
    """One CVE as shipped in an advisory: identifier, optional CVSS vector, text."""

    cve_id: str
    cvss_vector: str | None
    description: str
    source_advisory: str
    artificial: bool = False

    def __post_init__(self) -> None:
        if not _CVE_ID_RE.match(self.cve_id):
            raise SchemaViolation(f"bad CVE id: {self.cve_id!r}")
        if self.cve_id.startswith("XVE-") and not self.artificial:
            raise SchemaViolation(f"{self.cve_id}: XVE- prefix is reserved for artificial entries")


@dataclass(frozen=True)
class ClassifiedVuln:
    """A vulnerability with its derived (precondition, consequence) pair.

    ``rule_id`` names the classification rule that fired, or FALLBACK when no
    rule matched (conservative (OS(ADMIN), NONE) assignment).
    """

    record: VulnRecord
    precondition: PrivilegeLevel
    consequence: PrivilegeLevel
    rule_id: str

    def __post_init__(self) -> None:
        if self.rule_id == FALLBACK:
            if self.precondition is not _P.OS_ADMIN or self.consequence is not _P.NONE:
                raise SchemaViolation("FALLBACK classification must be (OS(ADMIN), NONE)")
        if self.consequence not in (_P.NONE, _P.OS_USER, _P.OS_ADMIN):
            raise SchemaViolation(f"consequence {self.consequence.value} is not a consequence category")

    @property
    def cve_id(self) -> str:
        return self.record.cve_id


@dataclass
class AttackerState:
    """Privilege the attacker holds on one node during a simulation.

    ``foothold`` flips to True on the first successful exploitation on the
    node, whatever privilege that exploitation yielded.  ``privilege`` only
    ever moves up the lattice.
    """

    node_id: str
    privilege: PrivilegeLevel = field(default=_P.NONE)
    foothold: bool = False

    def record_exploit(self, consequence: PrivilegeLevel) -> None:
        self.privilege = join(self.privilege, consequence)
        self.foothold = True
