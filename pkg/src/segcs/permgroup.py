"""Permutation-sequence groups describing extended sampling rows.

A segmented sampling matrix splits each sampling period into m_o
sub-periods.  An extended row is assembled from segments of the m_o
original rows, one segment per sub-period, so it is fully described by a
sequence whose k-th element names the source row for segment k.  Useful
extended rows come from sequences that are permutations of (1, ..., m_o):
each original row then contributes exactly one segment.

Two sequences correlate wherever they agree, because matching positions
make the corresponding rows share a segment.  This module provides

* cyclic-shift groups: m_o sequences that pairwise agree nowhere, so the
  rows they describe are mutually uncorrelated;
* the partition of all m_o! permutation sequences into (m_o-1)! such
  groups;
* for prime m_o, families of groups built from linear congruences in
  which any two sequences taken from different groups agree in exactly
  one position.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

# Full enumeration of the (m_o-1)! cyclic groups is refused above this
# many source rows; 8 already means 5040 groups.
ENUMERATION_CAP = 8

CYCLIC = "cyclic"
CONGRUENCE = "congruence"


class EnumerationCapError(ValueError):
    """A requested full enumeration would exceed ENUMERATION_CAP."""


def map_mod(x: int, m: int) -> int:
    """Reduce x modulo m onto the 1-based range {1, ..., m}.

    Ordinary mod maps multiples of m to 0; row indices start at 1, so
    the residue 0 must come out as m instead.
    """
    return (x - 1) % m + 1


@dataclass(frozen=True)
class PermutationSequence:
    """Source-row assignment for one extended row, 1-based, one entry per segment."""

    elements: tuple[int, ...]

    def __post_init__(self):
        elems = tuple(int(v) for v in self.elements)
        object.__setattr__(self, "elements", elems)
        m_o = len(elems)
        if m_o < 1:
            raise ValueError("sequence needs at least one element")
        if sorted(elems) != list(range(1, m_o + 1)):
            raise ValueError(f"not a permutation of 1..{m_o}: {elems}")

    @property
    def m_o(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, k):
        return self.elements[k]

    def __iter__(self):
        return iter(self.elements)

    def cyclic_shift(self) -> "PermutationSequence":
        """Move the final entry to the first position."""
        e = self.elements
        return PermutationSequence(e[-1:] + e[:-1])

    def serialize(self) -> str:
        return ",".join(str(v) for v in self.elements)

    @classmethod
    def parse(cls, text: str) -> "PermutationSequence":
        return cls(tuple(int(part) for part in text.strip().split(",")))


@dataclass(frozen=True)
class ConstantSequence:
    """Describes an original row: every segment comes from the same source row."""

    value: int
    m_o: int

    def __post_init__(self):
        if not 1 <= self.value <= self.m_o:
            raise ValueError(f"value {self.value} outside 1..{self.m_o}")

    def __len__(self):
        return self.m_o

    def __getitem__(self, k):
        if not 0 <= k < self.m_o:
            raise IndexError(k)
        return self.value

    def __iter__(self):
        return iter([self.value] * self.m_o)


def correlation_count(a, b) -> int:
    """Number of positions where the two sequences agree.

    Each agreement is one shared segment between the rows the sequences
    describe, so this count is proportional to the covariance of the
    corresponding samples.
    """
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return sum(1 for x, y in zip(a, b) if x == y)


@dataclass(frozen=True)
class SequenceGroup:
    """m_o sequences that pairwise agree nowhere."""

    members: tuple[PermutationSequence, ...]
    group_id: int
    generator: PermutationSequence

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if not members:
            raise ValueError("group has no members")
        m_o = members[0].m_o
        if len(members) != m_o:
            raise ValueError(f"group must hold exactly {m_o} sequences, got {len(members)}")
        if any(s.m_o != m_o for s in members):
            raise ValueError("mixed sequence lengths in one group")
        if len(set(members)) != len(members):
            raise ValueError("duplicate sequences in one group")
        for a, b in itertools.combinations(members, 2):
            c = correlation_count(a, b)
            if c != 0:
                raise ValueError(f"members {a.elements} and {b.elements} agree in {c} positions")

    @property
    def m_o(self) -> int:
        return self.members[0].m_o

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


@dataclass(frozen=True)
class GroupFamily:
    """A collection of groups, with the construction that produced it."""

    groups: tuple[SequenceGroup, ...]
    m_o: int
    construction: str
    alpha: int = field(default=0)  # number of groups for congruence families

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))
        if self.construction not in (CYCLIC, CONGRUENCE):
            raise ValueError(f"unknown construction {self.construction!r}")
        if any(g.m_o != self.m_o for g in self.groups):
            raise ValueError("group size does not match family m_o")
        everything = [s for g in self.groups for s in g]
        if len(set(everything)) != len(everything):
            raise ValueError("the same sequence appears in two groups")
        if self.construction == CONGRUENCE:
            for ga, gb in itertools.combinations(self.groups, 2):
                for a in ga:
                    for b in gb:
                        c = correlation_count(a, b)
                        if c != 1:
                            raise ValueError(
                                f"cross-group pair {a.elements}/{b.elements} agrees in "
                                f"{c} positions, expected exactly 1"
                            )

    def sequences(self) -> list[PermutationSequence]:
        return [s for g in self.groups for s in g]

    def __iter__(self):
        return iter(self.groups)

    def __len__(self):
        return len(self.groups)


def cyclic_shift_group(seed: PermutationSequence, group_id: int = 0) -> SequenceGroup:
    """The m_o cyclic shifts of a seed sequence.

    Shifting relabels positions by a fixed offset, and a permutation can
    only agree with a shifted copy of itself at a position that maps to
    itself, so distinct shifts agree nowhere.
    """
    members = [seed]
    for _ in range(seed.m_o - 1):
        members.append(members[-1].cyclic_shift())
    return SequenceGroup(members=tuple(members), group_id=group_id, generator=seed)


def cyclic_partition(m_o: int) -> GroupFamily:
    """Partition all m_o! permutation sequences into (m_o-1)! cyclic groups.

    Seeds are the permutations whose first element is 1; every
    permutation is a shift of exactly one seed.
    """
    if m_o < 1:
        raise ValueError("m_o must be at least 1")
    if m_o > ENUMERATION_CAP:
        raise EnumerationCapError(
            f"m_o={m_o} would enumerate {m_o}! sequences; cap is {ENUMERATION_CAP}"
        )
    groups = []
    for gid, rest in enumerate(itertools.permutations(range(2, m_o + 1))):
        seed = PermutationSequence((1,) + rest)
        groups.append(cyclic_shift_group(seed, group_id=gid))
    return GroupFamily(groups=tuple(groups), m_o=m_o, construction=CYCLIC)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def congruence_groups(m_o: int, alpha: int) -> GroupFamily:
    """alpha groups, prime m_o, cross-group agreement exactly one position.

    Group i is generated by the sequence with k-th element
    map_mod(1 + (k-1)*i, m_o); its member with first element j has k-th
    element map_mod(j + (k-1)*i, m_o).  For prime m_o the difference of
    two such linear progressions with distinct slopes vanishes at
    exactly one position, which is the single agreement.
    """
    if not _is_prime(m_o):
        raise ValueError(f"m_o={m_o} is not prime; the congruence construction needs a prime")
    if not 1 <= alpha <= m_o - 1:
        raise ValueError(f"alpha must lie in 1..{m_o - 1}, got {alpha}")
    groups = []
    for i in range(1, alpha + 1):
        members = tuple(
            PermutationSequence(tuple(map_mod(j + k * i, m_o) for k in range(m_o)))
            for j in range(1, m_o + 1)
        )
        groups.append(SequenceGroup(members=members, group_id=i, generator=members[0]))
    return GroupFamily(groups=tuple(groups), m_o=m_o, construction=CONGRUENCE, alpha=alpha)


def sequences_for_extension(m_o: int, alpha) -> list[PermutationSequence]:
    """Default choice of extended-row sequences for extension rate alpha.

    alpha <= 1: the first alpha*m_o shifts of the identity sequence, all
    from one cyclic group.  Integer alpha >= 2: all members of alpha
    congruence groups (prime m_o required).  alpha*m_o must be an
    integer so the row count is whole.
    """
    from fractions import Fraction

    alpha = Fraction(alpha)
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    m_e = alpha * m_o
    if m_e.denominator != 1:
        raise ValueError(f"alpha={alpha} does not give a whole number of rows for m_o={m_o}")
    m_e = int(m_e)
    if alpha <= 1:
        identity = PermutationSequence(tuple(range(1, m_o + 1)))
        return list(cyclic_shift_group(identity).members[:m_e])
    if alpha.denominator != 1:
        raise ValueError(f"alpha above 1 must be an integer, got {alpha}")
    return congruence_groups(m_o, int(alpha)).sequences()


def format_blocks(blocks) -> str:
    """Serialize (group_id, sequences) blocks, one sequence per line."""
    lines = []
    for group_id, seqs in blocks:
        lines.append(f"# group {group_id}")
        lines.extend(s.serialize() for s in seqs)
    return "\n".join(lines) + "\n"


def parse_blocks(text: str) -> list[tuple[int, list[PermutationSequence]]]:
    """Inverse of format_blocks; blocks may hold fewer than m_o sequences."""
    blocks: list[tuple[int, list[PermutationSequence]]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) != 2 or parts[0] != "group":
                raise ValueError(f"bad header line: {raw!r}")
            blocks.append((int(parts[1]), []))
        else:
            if not blocks:
                raise ValueError("sequence line before any group header")
            blocks[-1][1].append(PermutationSequence.parse(line))
    return blocks


def format_groups(family: GroupFamily) -> str:
    return format_blocks((g.group_id, list(g.members)) for g in family.groups)


def parse_groups(text: str) -> list[SequenceGroup]:
    """Parse blocks as full groups; each block's first sequence is its generator."""
    groups = []
    for group_id, seqs in parse_blocks(text):
        groups.append(SequenceGroup(members=tuple(seqs), group_id=group_id, generator=seqs[0]))
    return groups
