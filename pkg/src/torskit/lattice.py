"""Generic finite lattice engine.

Elements are opaque ids 0..n-1 with an order relation given either by
inclusion of bitmasks or by an abstract leq matrix.  On top of the order the
module computes covers, meet/join tables, semidistributivity, completely
join/meet-irreducible elements, the kappa and kappa_star maps, canonical
join/meet representations, the extended map kappa_bar and its orbits.

Nothing in this module knows about module categories; the torsion-class
engine feeds it bitmask-ordered elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    KappaUndefined,
    NoUniqueMax,
    NoUniqueMin,
    NotALattice,
    NotCJI,
    NotCMI,
    NotJoinSemidistributive,
)


@dataclass(frozen=True)
class FinitePoset:
    """A finite poset: n elements and a reflexive-antisymmetric-transitive leq."""

    n: int
    leq: np.ndarray  # boolean n x n, leq[i, j] iff i <= j

    def __post_init__(self):
        m = self.leq
        if m.shape != (self.n, self.n):
            raise NotALattice("leq matrix has wrong shape")
        if not m.diagonal().all():
            raise NotALattice("leq is not reflexive")
        if (m & m.T & ~np.eye(self.n, dtype=bool)).any():
            raise NotALattice("leq is not antisymmetric")
        if ((m.astype(np.int64) @ m.astype(np.int64) > 0) & ~m).any():
            raise NotALattice("leq is not transitive")


@dataclass(frozen=True)
class JoinRep:
    joinands: frozenset[int]
    target: int
    canonical: bool = False


@dataclass(frozen=True)
class MeetRep:
    meetands: frozenset[int]
    target: int
    canonical: bool = False


@dataclass(frozen=True)
class KappaOrbit:
    elements: tuple[int, ...]
    joinand_counts: tuple[int, ...]

    @property
    def average(self) -> Fraction:
        if not self.elements:
            return Fraction(0)
        return Fraction(sum(self.joinand_counts), len(self.elements))


class Lattice:
    """Finite lattice with meet/join tables, covers and optional edge labels."""

    def __init__(self, poset: FinitePoset, edge_labels: dict | None = None):
        self.poset = poset
        self.n = poset.n
        self._leq = poset.leq
        self.meet_table, self.join_table = self._build_tables()
        bottoms = [i for i in range(self.n) if self._leq[i].sum() == self.n]
        tops = [i for i in range(self.n) if self._leq[:, i].sum() == self.n]
        if len(bottoms) != 1 or len(tops) != 1:
            raise NotALattice("no unique bottom or top element")
        self.bottom = bottoms[0]
        self.top = tops[0]
        self.cover_edges = self._covers()
        self.lower_covers: list[list[int]] = [[] for _ in range(self.n)]
        self.upper_covers: list[list[int]] = [[] for _ in range(self.n)]
        for lo, hi in self.cover_edges:
            self.lower_covers[hi].append(lo)
            self.upper_covers[lo].append(hi)
        self.edge_labels = dict(edge_labels or {})

    # -- order primitives --------------------------------------------------

    def leq(self, i: int, j: int) -> bool:
        return bool(self._leq[i, j])

    def lt(self, i: int, j: int) -> bool:
        return i != j and bool(self._leq[i, j])

    def meet(self, i: int, j: int) -> int:
        return int(self.meet_table[i, j])

    def join(self, i: int, j: int) -> int:
        return int(self.join_table[i, j])

    def join_of(self, ids: Iterable[int]) -> int:
        out = self.bottom
        for i in ids:
            out = self.join(out, i)
        return out

    def meet_of(self, ids: Iterable[int]) -> int:
        out = self.top
        for i in ids:
            out = self.meet(out, i)
        return out

    def _build_tables(self) -> tuple[np.ndarray, np.ndarray]:
        n, leq = self.poset.n, self._leq
        meet = np.full((n, n), -1, dtype=np.int64)
        join = np.full((n, n), -1, dtype=np.int64)
        strict = leq & ~np.eye(n, dtype=bool)
        for i in range(n):
            for j in range(i, n):
                low = np.flatnonzero(leq[:, i] & leq[:, j])
                maximal = low[~strict[np.ix_(low, low)].any(axis=1)]
                if len(maximal) != 1:
                    raise NotALattice(
                        f"elements {i},{j} have {len(maximal)} maximal lower bounds"
                    )
                meet[i, j] = meet[j, i] = maximal[0]
                up = np.flatnonzero(leq[i] & leq[j])
                minimal = up[~strict[np.ix_(up, up)].any(axis=0)]
                if len(minimal) != 1:
                    raise NotALattice(
                        f"elements {i},{j} have {len(minimal)} minimal upper bounds"
                    )
                join[i, j] = join[j, i] = minimal[0]
        return meet, join

    def _covers(self) -> list[tuple[int, int]]:
        leq = self._leq
        strict = leq & ~np.eye(self.n, dtype=bool)
        in_between = strict.astype(np.int64) @ strict.astype(np.int64) > 0
        cover = strict & ~in_between
        return [(int(i), int(j)) for i, j in np.argwhere(cover)]


def build_lattice_from_leq(n: int, leq) -> Lattice:
    """Build from an abstract order: a boolean matrix or a callable leq(i, j)."""
    if callable(leq):
        m = np.fromfunction(
            np.vectorize(lambda i, j: bool(leq(int(i), int(j)))), (n, n), dtype=int
        ).astype(bool)
    else:
        m = np.asarray(leq, dtype=bool)
    return Lattice(FinitePoset(n, m))


def build_lattice(bitsets: Sequence[int]) -> Lattice:
    """Build from elements given as bitmasks ordered by inclusion."""
    n = len(bitsets)
    m = np.zeros((n, n), dtype=bool)
    for i, a in enumerate(bitsets):
        for j, b in enumerate(bitsets):
            m[i, j] = (a & b) == a
    return Lattice(FinitePoset(n, m))


def dual_lattice(lattice: Lattice) -> Lattice:
    return Lattice(FinitePoset(lattice.n, lattice.poset.leq.T.copy()))


def divisor_lattice(n: int) -> tuple[Lattice, list[int]]:
    """Divisors of n ordered by divisibility; returns the lattice and values."""
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    k = len(divisors)
    m = np.zeros((k, k), dtype=bool)
    for i, a in enumerate(divisors):
        for j, b in enumerate(divisors):
            m[i, j] = b % a == 0
    return Lattice(FinitePoset(k, m)), divisors


# -- semidistributivity ------------------------------------------------------


def is_semidistributive(lattice: Lattice):
    """Check SD-join and SD-meet on all triples.

    Returns (True, None) or (False, (law, x, y, z)) with the first failing
    triple in lexicographic order; law is "SDjoin" or "SDmeet".
    """
    n = lattice.n
    join, meet = lattice.join_table, lattice.meet_table
    for x in range(n):
        jx, mx = join[x], meet[x]
        same_j = jx[:, None] == jx[None, :]
        bad = same_j & (jx[meet] != jx[:, None])
        if bad.any():
            y, z = map(int, np.argwhere(bad)[0])
            return False, ("SDjoin", x, y, z)
        same_m = mx[:, None] == mx[None, :]
        bad = same_m & (mx[join] != mx[:, None])
        if bad.any():
            y, z = map(int, np.argwhere(bad)[0])
            return False, ("SDmeet", x, y, z)
    return True, None


# -- irreducibles and kappa --------------------------------------------------


def cji_elements(lattice: Lattice) -> list[int]:
    """Elements with exactly one lower cover (bottom never qualifies)."""
    return [x for x in range(lattice.n) if len(lattice.lower_covers[x]) == 1]


def cmi_elements(lattice: Lattice) -> list[int]:
    """Elements with exactly one upper cover (top never qualifies)."""
    return [x for x in range(lattice.n) if len(lattice.upper_covers[x]) == 1]


def kappa(lattice: Lattice, j: int) -> int:
    """Unique maximal x with j_* <= x and j not<= x."""
    lc = lattice.lower_covers[j]
    if len(lc) != 1:
        raise NotCJI(f"element {j} has {len(lc)} lower covers")
    jstar = lc[0]
    leq = lattice.poset.leq
    cand = np.flatnonzero(leq[jstar] & ~leq[j])
    strict = leq & ~np.eye(lattice.n, dtype=bool)
    maximal = cand[~strict[np.ix_(cand, cand)].any(axis=1)]
    if len(maximal) != 1:
        raise NoUniqueMax(
            f"kappa({j}) has {len(maximal)} maximal candidates: {maximal.tolist()}"
        )
    return int(maximal[0])


def kappa_star(lattice: Lattice, m: int) -> int:
    """Unique minimal x with x <= m_* and x not<= m; inverse of kappa."""
    uc = lattice.upper_covers[m]
    if len(uc) != 1:
        raise NotCMI(f"element {m} has {len(uc)} upper covers")
    mstar = uc[0]
    leq = lattice.poset.leq
    cand = np.flatnonzero(leq[:, mstar] & ~leq[:, m])
    strict = leq & ~np.eye(lattice.n, dtype=bool)
    minimal = cand[~strict[np.ix_(cand, cand)].any(axis=0)]
    if len(minimal) != 1:
        raise NoUniqueMin(
            f"kappa_star({m}) has {len(minimal)} minimal candidates: {minimal.tolist()}"
        )
    return int(minimal[0])


# -- canonical join and meet representations ---------------------------------


def cjr(lattice: Lattice, x: int) -> JoinRep:
    """Canonical join representation via per-cover minimal join complements.

    For each lower cover y of x the set {z <= x : z v y = x} is meet-closed
    when SD-join holds, so it has a least element; those least elements are
    the canonical joinands.  A cover whose complement set has no least
    element witnesses failure of join-semidistributivity.
    """
    joinands = set()
    for y in lattice.lower_covers[x]:
        sols = [
            z
            for z in range(lattice.n)
            if lattice.leq(z, x) and lattice.join(z, y) == x
        ]
        least = [z for z in sols if all(lattice.leq(z, w) for w in sols)]
        if len(least) != 1:
            raise NotJoinSemidistributive(
                f"cover ({y}, {x}) has no least join complement"
            )
        joinands.add(least[0])
    rep = JoinRep(frozenset(joinands), x, canonical=True)
    if lattice.join_of(rep.joinands) != x:
        raise NotJoinSemidistributive(f"canonical joinands of {x} do not join to it")
    return rep


def cmr(lattice: Lattice, x: int) -> MeetRep:
    """Canonical meet representation, computed dually to cjr."""
    meetands = set()
    for y in lattice.upper_covers[x]:
        sols = [
            z
            for z in range(lattice.n)
            if lattice.leq(x, z) and lattice.meet(z, y) == x
        ]
        greatest = [z for z in sols if all(lattice.leq(w, z) for w in sols)]
        if len(greatest) != 1:
            raise NotJoinSemidistributive(
                f"cover ({x}, {y}) has no greatest meet complement"
            )
        meetands.add(greatest[0])
    rep = MeetRep(frozenset(meetands), x, canonical=True)
    if lattice.meet_of(rep.meetands) != x:
        raise NotJoinSemidistributive(f"canonical meetands of {x} do not meet to it")
    return rep


def kappa_bar(lattice: Lattice, x: int) -> int:
    """Meet of kappa over the canonical joinands; empty meet is the top."""
    try:
        rep = cjr(lattice, x)
        return lattice.meet_of(kappa(lattice, j) for j in rep.joinands)
    except (NotJoinSemidistributive, NotCJI, NoUniqueMax) as exc:
        raise KappaUndefined(f"kappa_bar({x}): {exc}") from exc


def kappa_bar_orbits(lattice: Lattice) -> list[KappaOrbit]:
    """Partition the lattice into kappa_bar cycles.

    Orbits are listed by their smallest element id and each cycle starts at
    that element.  Raises KappaUndefined when kappa_bar is not a bijection.
    """
    n = lattice.n
    image = [kappa_bar(lattice, x) for x in range(n)]
    if sorted(image) != list(range(n)):
        raise KappaUndefined("kappa_bar is not a bijection on this lattice")
    counts = [len(cjr(lattice, x).joinands) for x in range(n)]
    seen = [False] * n
    orbits = []
    for start in range(n):
        if seen[start]:
            continue
        cycle = []
        x = start
        while not seen[x]:
            seen[x] = True
            cycle.append(x)
            x = image[x]
        orbits.append(
            KappaOrbit(tuple(cycle), tuple(counts[e] for e in cycle))
        )
    return orbits


def brute_force_cjr(lattice: Lattice, x: int) -> JoinRep | None:
    """Literal canonical join representation by antichain enumeration.

    Enumerates every irredundant join representation of x (each one is an
    antichain below x) and returns the unique lowest one under refinement,
    or None when no unique lowest representation exists.  Exponential; meant
    as an oracle for small lattices.
    """
    cand = [z for z in range(lattice.n) if lattice.leq(z, x)]
    reps: list[frozenset[int]] = []

    def record(ac: list[int]):
        for a in ac:
            rest = [b for b in ac if b != a]
            if lattice.join_of(rest) == x:
                return
        reps.append(frozenset(ac))

    def extend(start: int, ac: list[int], cur_join: int):
        if cur_join == x:
            record(ac)
            return
        for k in range(start, len(cand)):
            z = cand[k]
            if lattice.leq(z, cur_join):
                continue
            if any(lattice.leq(z, a) or lattice.leq(a, z) for a in ac):
                continue
            ac.append(z)
            extend(k + 1, ac, lattice.join(cur_join, z))
            ac.pop()

    extend(0, [], lattice.bottom)

    def lower(a: frozenset[int], b: frozenset[int]) -> bool:
        return all(any(lattice.leq(e, f) for f in b) for e in a)

    lowest = [a for a in reps if all(lower(a, b) for b in reps)]
    if len(lowest) != 1:
        return None
    return JoinRep(lowest[0], x, canonical=True)


def brute_force_cmr(lattice: Lattice, x: int) -> MeetRep | None:
    """Dual oracle: lowest irredundant search in the dual lattice."""
    rep = brute_force_cjr(dual_lattice(lattice), x)
    if rep is None:
        return None
    return MeetRep(rep.joinands, x, canonical=True)


# -- exchange format and DOT -------------------------------------------------


def to_text(lattice: Lattice, names: Sequence[str] | None = None) -> str:
    """Serialize in the line-oriented `lattice v1` exchange format."""
    names = list(names) if names is not None else [str(i) for i in range(lattice.n)]
    lines = ["lattice v1"]
    lines += [f"elem {name}" for name in names]
    for lo, hi in sorted(lattice.cover_edges):
        lines.append(f"cover {names[lo]} {names[hi]}")
    for (lo, hi), label in sorted(lattice.edge_labels.items()):
        lines.append(f"label {names[lo]} {names[hi]} {label}")
    return "\n".join(lines) + "\n"


def from_text(text: str) -> tuple[Lattice, list[str]]:
    """Parse the `lattice v1` format back into a Lattice plus element names."""
    names: list[str] = []
    covers: list[tuple[str, str]] = []
    labels: list[tuple[str, str, str]] = []
    lines = [ln.strip() for ln in text.splitlines()]
    if not lines or lines[0] != "lattice v1":
        raise NotALattice("missing `lattice v1` header")
    for ln in lines[1:]:
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if parts[0] == "elem" and len(parts) == 2:
            names.append(parts[1])
        elif parts[0] == "cover" and len(parts) == 3:
            covers.append((parts[1], parts[2]))
        elif parts[0] == "label" and len(parts) >= 4:
            labels.append((parts[1], parts[2], " ".join(parts[3:])))
        else:
            raise NotALattice(f"bad lattice v1 line: {ln!r}")
    index = {name: i for i, name in enumerate(names)}
    n = len(names)
    leq = np.eye(n, dtype=bool)
    for lo, hi in covers:
        leq[index[lo], index[hi]] = True
    # reflexive-transitive closure of the cover relation
    changed = True
    while changed:
        closed = leq | ((leq.astype(np.int64) @ leq.astype(np.int64)) > 0)
        changed = (closed != leq).any()
        leq = closed
    lattice = Lattice(FinitePoset(n, leq))
    got = {(index[lo], index[hi]) for lo, hi in covers}
    if got != set(lattice.cover_edges):
        raise NotALattice("cover lines are not the Hasse diagram of their closure")
    lattice.edge_labels = {(index[lo], index[hi]): lab for lo, hi, lab in labels}
    return lattice, names


def to_dot(
    lattice: Lattice,
    names: Sequence[str] | None = None,
    edge_labels: dict | None = None,
) -> str:
    """Hasse diagram in DOT, bottom element at the bottom of the drawing."""
    names = list(names) if names is not None else [str(i) for i in range(lattice.n)]
    labels = edge_labels if edge_labels is not None else lattice.edge_labels
    out = ["digraph lattice {", "  rankdir=BT;", "  node [shape=plaintext];"]
    for i, name in enumerate(names):
        out.append(f'  n{i} [label="{name}"];')
    for lo, hi in sorted(lattice.cover_edges):
        lab = labels.get((lo, hi))
        attr = f' [label="{lab}"]' if lab is not None else ""
        out.append(f"  n{lo} -> n{hi}{attr};")
    out.append("}")
    return "\n".join(out) + "\n"
