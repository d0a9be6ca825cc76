"""Complete catalogs of indecomposables for representation-finite fixtures.

Enumeration is exhaustive over arrow-matrix tuples per dimension vector, with
isomorphism deduplication.  Completeness is established by closing the
catalog under tau, tau^{-1} and extension middle terms: any escape grows the
dimension cap and retries (starting from the projective/injective dims).
Known counts for shipped fixtures are asserted in the test suite.
"""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction

import numpy as np

from . import fp, reps
from .algebra import AlgebraSpec
from .errors import (
    BudgetExceeded,
    CapExceeded,
    EndTooLarge,
    IncompleteCatalog,
    NotInCatalog,
)


class Caps:
    """Enumeration budgets; TORSKIT_BUDGET overrides end/ext/hom caps."""

    def __init__(self, end=4096, ext=4096, hom=4096, search=1 << 22, scan=1 << 16):
        self.end = end
        self.ext = ext
        self.hom = hom
        self.search = search
        self.scan = scan


DEFAULT_CAPS = Caps()


def is_indecomposable(algebra: AlgebraSpec, m: reps.Rep, cap: int = 4096) -> bool:
    """End(m) is local: every endomorphism is invertible or nilpotent."""
    if m.is_zero:
        return False
    basis = reps.hom_basis(algebra, m, m)
    if len(basis) == 1:
        return True
    p = algebra.p
    if p ** len(basis) > cap:
        raise EndTooLarge(f"p^{len(basis)} endomorphisms exceed cap {cap}")
    steps = max(1, m.total_dim).bit_length()
    for f in reps.hom_elements(algebra, m, m, cap=cap):
        if reps.is_invertible_hom(f, p):
            continue
        g = f
        for _ in range(steps):
            g = tuple((gv @ gv) % p for gv in g)
        if any(gv.any() for gv in g):
            return False
    return True


class Catalog:
    """All indecomposables of a representation-finite algebra, with tables."""

    def __init__(self, algebra: AlgebraSpec, indecs: list[reps.Rep], caps: Caps):
        self.algebra = algebra
        self.indecs = indecs
        self.caps = caps
        self.n = len(indecs)
        self._fill_tables()
        self._name_entries()
        self._decompose_cache: dict[tuple, dict[int, int]] = {}

    # -- lookups ---------------------------------------------------------------

    def index_of(self, m: reps.Rep) -> int | None:
        for i, entry in enumerate(self.indecs):
            if entry.dims == m.dims and reps.is_isomorphic(
                self.algebra, m, entry, cap=self.caps.hom
            ):
                return i
        return None

    def require_index(self, m: reps.Rep) -> int:
        idx = self.index_of(m)
        if idx is None:
            raise NotInCatalog(
                f"module with dims {m.dims} is not in the catalog", dims=m.dims
            )
        return idx

    def _fill_tables(self):
        alg, n = self.algebra, self.n
        self.hom = fp.zeros(n, n)
        self.ext = fp.zeros(n, n)
        for i, mi in enumerate(self.indecs):
            for j, mj in enumerate(self.indecs):
                self.hom[i, j] = reps.hom_dim(alg, mi, mj)
                self.ext[i, j] = reps.ext_dim(alg, mi, mj)
        self.brick_flags = [
            reps.end_is_brick(alg, m, cap=self.caps.end) for m in self.indecs
        ]
        self.projective_flags = [
            any(
                m.dims == q.dims and reps.is_isomorphic(alg, m, q, cap=self.caps.hom)
                for q in alg.projectives
            )
            for m in self.indecs
        ]
        self.injective_flags = [
            any(
                m.dims == q.dims and reps.is_isomorphic(alg, m, q, cap=self.caps.hom)
                for q in alg.injectives
            )
            for m in self.indecs
        ]
        self.tau_of: list[int | None] = []
        self.tau_inv_of: list[int | None] = []
        for m in self.indecs:
            t = reps.tau(alg, m)
            self.tau_of.append(None if t.is_zero else self.require_index(t))
            t = reps.tau_inv(alg, m)
            self.tau_inv_of.append(None if t.is_zero else self.require_index(t))

    def _name_entries(self):
        alg = self.algebra
        self.names: list[str] = []
        self.aliases: dict[str, int] = {}
        simples = [reps.simple_rep(alg, v) for v in range(alg.num_vertices)]
        for i, m in enumerate(self.indecs):
            tags = []
            for v in range(alg.num_vertices):
                vn = alg.vertices[v]
                if m.dims == simples[v].dims and reps.is_isomorphic(
                    alg, m, simples[v], cap=self.caps.hom
                ):
                    tags.append(f"S{vn}")
                if self.projective_flags[i] and reps.is_isomorphic(
                    alg, m, alg.projectives[v], cap=self.caps.hom
                ):
                    tags.append(f"P{vn}")
                if self.injective_flags[i] and reps.is_isomorphic(
                    alg, m, alg.injectives[v], cap=self.caps.hom
                ):
                    tags.append(f"I{vn}")
            tags.sort(key=lambda t: {"S": 0, "P": 1, "I": 2}[t[0]])
            name = tags[0] if tags else f"M{m.dim_vector_str()}"
            self.names.append(name)
            for t in tags:
                self.aliases[t] = i
            self.aliases[f"M{m.dim_vector_str()}"] = i
            self.aliases[str(i)] = i

    def lookup(self, name: str) -> int:
        if name in self.aliases:
            return self.aliases[name]
        raise NotInCatalog(f"no module named {name!r} in the catalog")

    # -- extension structure -----------------------------------------------------

    @functools.lru_cache(maxsize=None)
    def extension_summands(self, i: int, j: int) -> tuple[frozenset[int], ...]:
        """Summand index sets of middle terms of nonzero classes in
        Ext^1(indec i, indec j), i.e. of sequences 0 -> X_j -> E -> X_i -> 0."""
        alg = self.algebra
        ext = reps.ext_space(alg, self.indecs[i], self.indecs[j])
        if ext.dim == 0:
            return ()
        out = set()
        for eta in reps.ext_classes(alg, ext, nonzero_only=True, cap=self.caps.ext):
            middle = reps.middle_term(alg, ext, eta)
            out.add(frozenset(self.decompose(middle)))
        return tuple(sorted(out, key=sorted))

    # -- Krull-Schmidt decomposition ----------------------------------------------

    def decompose(self, x: reps.Rep, cross_check: bool = False) -> dict[int, int]:
        """Multiset of catalog indices by idempotent (Fitting) splitting."""
        key = (x.dims, tuple(fp.matrix_key(m) for m in x.mats))
        if key in self._decompose_cache:
            out = self._decompose_cache[key]
        else:
            out = self._decompose(x)
            self._decompose_cache[key] = out
        if cross_check:
            finger = self.decompose_by_fingerprint(x)
            if finger != out:
                raise IncompleteCatalog(
                    f"decompose mismatch: splitting {out} vs fingerprint {finger}"
                )
        return out

    def _decompose(self, x: reps.Rep) -> dict[int, int]:
        alg, p = self.algebra, self.algebra.p
        if x.is_zero:
            return {}
        for i, entry in enumerate(self.indecs):
            if entry.dims == x.dims and reps.is_isomorphic(
                alg, x, entry, cap=self.caps.hom
            ):
                return {i: 1}
        basis = reps.hom_basis(alg, x, x)
        if p ** len(basis) > self.caps.end:
            raise EndTooLarge(
                f"p^{len(basis)} endomorphisms of a dim {x.dims} module exceed cap"
            )
        steps = max(1, x.total_dim).bit_length()
        for f in reps.hom_elements(alg, x, x, cap=self.caps.end):
            if all(not fv.any() for fv in f) or reps.is_invertible_hom(f, p):
                continue
            g = f
            for _ in range(steps):
                g = tuple((gv @ gv) % p for gv in g)
            if not any(gv.any() for gv in g):
                continue
            ker = reps.kernel_subspaces(g, p)
            part_a = reps.sub_rep(alg, x, ker)
            part_b = reps.image_rep(alg, g, x)
            if part_a.total_dim + part_b.total_dim != x.total_dim:
                raise IncompleteCatalog("Fitting split dims do not add up")
            out: dict[int, int] = {}
            for part in (part_a, part_b):
                for idx, mult in self._decompose(part).items():
                    out[idx] = out.get(idx, 0) + mult
            return out
        raise NotInCatalog(
            f"indecomposable with dims {x.dims} is not in the catalog", dims=x.dims
        )

    def decompose_by_fingerprint(self, x: reps.Rep) -> dict[int, int]:
        """Independent route: solve sum_V m_V hom(U, V) = hom(U, x) over Q."""
        alg = self.algebra
        b = [Fraction(reps.hom_dim(alg, m, x)) for m in self.indecs]
        a = [
            [Fraction(int(self.hom[u, v])) for v in range(self.n)]
            for u in range(self.n)
        ]
        mult = _solve_rational(a, b)
        if mult is None:
            raise IncompleteCatalog("hom fingerprint system is singular")
        out = {}
        for v, q in enumerate(mult):
            if q.denominator != 1 or q < 0:
                raise IncompleteCatalog(f"non-integral fingerprint multiplicity {q}")
            if q:
                out[v] = int(q)
        return out

    def dump(self) -> dict:
        """JSON-ready catalog dump."""
        entries = []
        for i, m in enumerate(self.indecs):
            entries.append(
                {
                    "index": i,
                    "name": self.names[i],
                    "dims": list(m.dims),
                    "mats": {
                        self.algebra.arrows[a].name: m.mats[a].tolist()
                        for a in range(len(self.algebra.arrows))
                    },
                    "brick": self.brick_flags[i],
                    "projective": self.projective_flags[i],
                    "injective": self.injective_flags[i],
                    "tau": self.tau_of[i],
                    "tau_inv": self.tau_inv_of[i],
                }
            )
        return {
            "algebra": {
                "vertices": list(self.algebra.vertices),
                "field": self.algebra.p,
            },
            "entries": entries,
            "hom": self.hom.tolist(),
            "ext": self.ext.tolist(),
        }


def _solve_rational(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Gaussian elimination over Q for a square system; None when singular."""
    n = len(b)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        scale = m[col][col]
        m[col] = [v / scale for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [v - factor * w for v, w in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def _initial_cap(algebra: AlgebraSpec) -> tuple[int, ...]:
    nv = algebra.num_vertices
    cap = [1] * nv
    for m in list(algebra.projectives) + list(algebra.injectives):
        for v in range(nv):
            cap[v] = max(cap[v], m.dims[v])
    return tuple(cap)


def _enumerate_dim_vector(algebra: AlgebraSpec, dims, caps: Caps) -> list[reps.Rep]:
    """All indecomposables with the given dimension vector, up to iso."""
    p = algebra.p
    cells = sum(dims[a.tgt] * dims[a.src] for a in algebra.arrows)
    if p**cells > caps.search:
        raise BudgetExceeded(
            f"p^{cells} matrix tuples for dims {tuple(dims)} exceed the budget"
        )
    per_arrow = []
    for a in algebra.arrows:
        shape = (dims[a.tgt], dims[a.src])
        mats = [
            vec.reshape(shape)
            for vec in fp.all_vectors(shape[0] * shape[1], p)
        ]
        per_arrow.append(mats)
    found: list[reps.Rep] = []
    for combo in itertools.product(*per_arrow):
        try:
            rep = reps.Rep(algebra, tuple(dims), combo)
        except ValueError:
            continue
        if not is_indecomposable(algebra, rep, cap=caps.end):
            continue
        if any(
            reps.is_isomorphic(algebra, rep, other, cap=caps.hom) for other in found
        ):
            continue
        found.append(rep)
    return found


def enumerate_indecomposables(
    algebra: AlgebraSpec,
    dim_cap: tuple[int, ...] | None = None,
    caps: Caps | None = None,
    max_rounds: int = 8,
) -> Catalog:
    """Catalog of all indecomposables with dims at most dim_cap.

    Without an explicit cap, starts at the projective/injective dimensions
    and grows whenever closing under tau or extension middle terms escapes.
    """
    caps = caps or DEFAULT_CAPS
    cap = tuple(dim_cap) if dim_cap is not None else _initial_cap(algebra)
    for _ in range(max_rounds):
        indecs: list[reps.Rep] = []
        for dims in itertools.product(*(range(c + 1) for c in cap)):
            if not any(dims):
                continue
            indecs.extend(_enumerate_dim_vector(algebra, dims, caps))
        indecs.sort(key=lambda r: r.key())
        try:
            catalog = Catalog(algebra, indecs, caps)
            for i in range(catalog.n):
                for j in range(catalog.n):
                    if catalog.ext[i, j]:
                        catalog.extension_summands(i, j)
            return catalog
        except NotInCatalog as exc:
            if dim_cap is not None:
                raise IncompleteCatalog(
                    f"catalog capped at {dim_cap} misses a module of dims {exc.dims}"
                ) from exc
            if exc.dims is None:
                raise
            cap = tuple(max(c, d) for c, d in zip(cap, exc.dims))
    raise IncompleteCatalog(f"catalog did not close after {max_rounds} cap bumps")
