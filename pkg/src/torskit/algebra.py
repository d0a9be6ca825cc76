"""Quiver algebra specifications: parsing, path bases, projectives.

An algebra is presented as a quiver with admissible relations over a prime
field F_p.  Paths are stored as tuples of arrow indices in application
order: the path (a, b) starts at the source of a, applies a first and b
second.  In the `relation` syntax of the input format the rightmost arrow of
a path expression is applied first, so the text `a·b·c` parses to the tuple
(c, b, a).

The PathBasis computes a vector-space basis of kQ/I per (source, target)
pair together with normal forms of arbitrary paths.  Relations are required
to be length-homogeneous (all paths in one relation have the same length),
which makes the ideal graded and the normal-form computation exact.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import fp
from .errors import (
    AlgebraSyntaxError,
    NonAdmissibleRelation,
    NonParallelRelation,
    NonPrimeField,
    UndefinedArrow,
)


@dataclass(frozen=True)
class Arrow:
    name: str
    src: int
    tgt: int


# one relation = tuple of (coeff, arrows) with arrows in application order
Relation = tuple[tuple[int, tuple[int, ...]], ...]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class AlgebraSpec:
    """A bound quiver algebra kQ/I over F_p.

    Immutable after construction; derived structure (path basis, opposite
    algebra, projective and injective representations) is cached lazily.
    """

    def __init__(
        self,
        vertices: tuple[str, ...],
        arrows: tuple[Arrow, ...],
        relations: tuple[Relation, ...],
        p: int = 2,
        max_path_len: int = 24,
    ):
        if not _is_prime(p):
            raise NonPrimeField(f"field size {p} is not prime")
        self.vertices = tuple(vertices)
        self.arrows = tuple(arrows)
        self.relations = tuple(relations)
        self.p = p
        self.max_path_len = max_path_len
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        self.aindex = {a.name: i for i, a in enumerate(self.arrows)}
        self._validate()
        self._op: AlgebraSpec | None = None

    # -- basic structure -----------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def _validate(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraSyntaxError("duplicate vertex name", 0)
        if len(self.aindex) != len(self.arrows):
            raise AlgebraSyntaxError("duplicate arrow name", 0)
        for rel in self.relations:
            if not rel:
                raise NonAdmissibleRelation("empty relation")
            ends = set()
            lengths = set()
            for coeff, path in rel:
                if len(path) < 2:
                    raise NonAdmissibleRelation(
                        "relation path has length < 2, ideal not admissible"
                    )
                for k in range(len(path) - 1):
                    if self.arrows[path[k]].tgt != self.arrows[path[k + 1]].src:
                        raise NonParallelRelation("relation path does not compose")
                ends.add((self.arrows[path[0]].src, self.arrows[path[-1]].tgt))
                lengths.add(len(path))
                if coeff % self.p == 0:
                    raise NonAdmissibleRelation("relation term vanishes mod p")
            if len(ends) != 1:
                raise NonParallelRelation(
                    "paths in one relation must share source and target"
                )
            if len(lengths) != 1:
                raise NonAdmissibleRelation(
                    "paths in one relation must have equal length"
                )

    @functools.cached_property
    def is_hereditary(self) -> bool:
        """No relations and no directed cycles."""
        if self.relations:
            return False
        n = self.num_vertices
        adj = np.zeros((n, n), dtype=bool)
        for a in self.arrows:
            if a.src == a.tgt:
                return False
            adj[a.src, a.tgt] = True
        reach = adj.copy()
        for _ in range(n):
            reach = reach | ((reach.astype(np.int64) @ adj.astype(np.int64)) > 0)
        return not reach.diagonal().any()

    @property
    def op(self) -> "AlgebraSpec":
        """Opposite algebra: arrows reversed, relation paths reversed."""
        if self._op is None:
            arrows = tuple(Arrow(a.name, a.tgt, a.src) for a in self.arrows)
            rels = tuple(
                tuple((c, tuple(reversed(path))) for c, path in rel)
                for rel in self.relations
            )
            other = AlgebraSpec(
                self.vertices, arrows, rels, self.p, self.max_path_len
            )
            other._op = self
            self._op = other
        return self._op

    # -- path basis ------------------------------------------------------------

    @functools.cached_property
    def basis(self) -> "PathBasis":
        return PathBasis(self)

    @property
    def dimension(self) -> int:
        return sum(len(b) for b in self.basis.blocks.values())

    def projective(self, i: int):
        """Indecomposable projective at vertex i, as a representation."""
        from .reps import Rep

        basis = self.basis
        dims = tuple(len(basis.proj_paths(i, j)) for j in range(self.num_vertices))
        mats = []
        for a_idx, a in enumerate(self.arrows):
            src_paths = basis.proj_paths(i, a.src)
            tgt_paths = basis.proj_paths(i, a.tgt)
            tgt_pos = {path: r for r, path in enumerate(tgt_paths)}
            m = fp.zeros(len(tgt_paths), len(src_paths))
            for c, path in enumerate(src_paths):
                for q, coeff in basis.normal_form(i, path + (a_idx,)).items():
                    m[tgt_pos[q], c] = coeff
            mats.append(m)
        return Rep(self, dims, tuple(mats))

    def injective(self, i: int):
        """Indecomposable injective at vertex i: dual of the opposite projective."""
        from .reps import dual_rep

        return dual_rep(self.op.projective(i))

    @functools.cached_property
    def projectives(self) -> list:
        return [self.projective(i) for i in range(self.num_vertices)]

    @functools.cached_property
    def injectives(self) -> list:
        return [self.injective(i) for i in range(self.num_vertices)]

    @functools.cached_property
    def cartan_matrix(self) -> np.ndarray:
        """Column i holds the dimension vector of the projective at vertex i."""
        c = fp.zeros(self.num_vertices, self.num_vertices)
        for i, proj in enumerate(self.projectives):
            c[:, i] = proj.dims
        return c

    def __repr__(self):
        return (
            f"AlgebraSpec({len(self.vertices)} vertices, {len(self.arrows)} arrows, "
            f"{len(self.relations)} relations, p={self.p})"
        )


class PathBasis:
    """Basis of kQ/I by (source, target) pair with graded normal forms.

    Builds path spaces length by length.  At each length the ideal component
    is spanned by u * rho * w over relations rho and composable path pads
    u, w; the reduced row echelon form of that span picks pivot paths, and
    the non-pivot paths form the basis.  Construction stops at the first
    length where every path dies, which exists exactly when the ideal is
    admissible (enforced by max_path_len).
    """

    def __init__(self, algebra: AlgebraSpec):
        self.algebra = algebra
        nv = algebra.num_vertices
        # paths_by_len[l] maps (src, tgt) -> ordered list of arrow tuples
        self.paths_by_len: list[dict[tuple[int, int], list[tuple[int, ...]]]] = []
        # reduction[(src, l)] maps pivot path -> {basis path -> coeff}
        self._reduction: dict[tuple[int, int], dict] = {}
        self.blocks: dict[tuple[int, int], list[tuple[int, ...]]] = {
            (i, j): [] for i in range(nv) for j in range(nv)
        }
        self._build()

    def _path_ends(self, src: int, path: tuple[int, ...]) -> int:
        return self.algebra.arrows[path[-1]].tgt if path else src

    def _build(self):
        alg = self.algebra
        nv = alg.num_vertices
        level: dict[tuple[int, int], list[tuple[int, ...]]] = {}
        for i in range(nv):
            level.setdefault((i, i), []).append(())
        self.paths_by_len.append(level)
        self._basis_set: set[tuple[int, tuple[int, ...]]] = set()
        for (i, j), paths in level.items():
            self.blocks[(i, j)].extend(paths)
            self._basis_set.update((i, path) for path in paths)

        length = 0
        while True:
            length += 1
            if length > alg.max_path_len:
                raise NonAdmissibleRelation(
                    f"paths survive beyond length {alg.max_path_len}; "
                    "ideal is not admissible at this cap"
                )
            prev = self.paths_by_len[length - 1]
            level = {}
            count = 0
            for (i, j), paths in prev.items():
                for a_idx, a in enumerate(alg.arrows):
                    if a.src != j:
                        continue
                    for path in paths:
                        level.setdefault((i, a.tgt), []).append(path + (a_idx,))
                        count += 1
            if count > 200_000:
                raise NonAdmissibleRelation(
                    f"{count} paths of length {length}; ideal looks non-admissible"
                )
            self.paths_by_len.append(level)
            if not level:
                self.paths_by_len.pop()
                return
            alive = self._reduce_level(length)
            if not alive:
                self.paths_by_len.pop()
                return

    def _reduce_level(self, length: int) -> bool:
        """Reduce length-l paths modulo the graded ideal; True if any survive."""
        alg = self.algebra
        p = alg.p
        level = self.paths_by_len[length]
        alive = False
        for (i, j), paths in level.items():
            pos = {path: c for c, path in enumerate(paths)}
            rows = []
            for rel in alg.relations:
                rel_len = len(rel[0][1])
                rel_src = alg.arrows[rel[0][1][0]].src
                rel_tgt = alg.arrows[rel[0][1][-1]].tgt
                pad = length - rel_len
                if pad < 0:
                    continue
                for wl in range(pad + 1):
                    ul = pad - wl
                    rights = self.paths_by_len[wl].get((i, rel_src), [])
                    lefts = self.paths_by_len[ul].get((rel_tgt, j), [])
                    for w in rights:
                        for u in lefts:
                            row = np.zeros(len(paths), dtype=np.int64)
                            for coeff, rel_path in rel:
                                row[pos[w + rel_path + u]] += coeff
                            rows.append(row % p)
            if rows:
                red, pivots = fp.rref(np.array(rows, dtype=np.int64), p)
                pivot_set = set(pivots)
                keep = [path for c, path in enumerate(paths) if c not in pivot_set]
                reduction = {}
                for r, pc in enumerate(pivots):
                    expansion = {}
                    for c, path in enumerate(paths):
                        if c not in pivot_set and red[r, c]:
                            expansion[path] = (-int(red[r, c])) % p
                    reduction[paths[pc]] = expansion
                self._reduction[(i, j, length)] = reduction
            else:
                keep = list(paths)
            self.blocks[(i, j)].extend(keep)
            self._basis_set.update((i, path) for path in keep)
            if keep:
                alive = True
        return alive

    @functools.lru_cache(maxsize=None)
    def proj_paths(self, i: int, j: int) -> tuple[tuple[int, ...], ...]:
        """Basis paths from i to j, shortest first."""
        return tuple(self.blocks[(i, j)])

    def normal_form(self, src: int, path: tuple[int, ...]) -> dict[tuple[int, ...], int]:
        """Express the class of a path as coefficients over basis paths."""
        if len(path) >= len(self.paths_by_len):
            return {}
        if (src, path) in self._basis_set:
            return {path: 1}
        tgt = self._path_ends(src, path)
        reduction = self._reduction.get((src, tgt, len(path)))
        if reduction is None or path not in reduction:
            raise ValueError(f"path {path} from vertex {src} is not a valid path")
        return dict(reduction[path])


# -- quiver-spec text format --------------------------------------------------

PATH_SEPARATORS = ("·", ".")


def _parse_term(token: str, lineno: int, alg_arrows: dict[str, Arrow], aindex):
    """One relation term: `[coeff*]name·name·...` with rightmost applied first."""
    coeff_str, star, path_str = token.partition("*")
    if star:
        try:
            coeff = int(coeff_str)
        except ValueError:
            raise AlgebraSyntaxError(f"bad coefficient {coeff_str!r}", lineno)
    else:
        coeff, path_str = 1, token
    for sep in PATH_SEPARATORS[1:]:
        path_str = path_str.replace(sep, PATH_SEPARATORS[0])
    names = path_str.split(PATH_SEPARATORS[0])
    if any(not n for n in names):
        raise AlgebraSyntaxError(f"bad path expression {token!r}", lineno)
    for n in names:
        if n not in alg_arrows:
            raise UndefinedArrow(f"line {lineno}: arrow {n!r} is not declared")
    arrows = tuple(aindex[n] for n in reversed(names))
    return coeff, arrows


def parse_algebra(text: str, default_p: int = 2) -> AlgebraSpec:
    """Parse the `algebra v1` text format.

    Lines: `vertex <name>...`, `arrow <name> <src> <tgt>`,
    `relation <term> [+|- <term>]...`, `field <p>`; `#` starts a comment.
    Relation terms are `[coeff*]path` where a path joins arrow names with
    `·` or `.` and the rightmost arrow acts first.
    """
    vertices: list[str] = []
    arrow_rows: list[tuple[int, str, str, str]] = []
    relation_rows: list[tuple[int, list[str]]] = []
    p = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head, rest = parts[0], parts[1:]
        if head == "algebra":
            if rest != ["v1"]:
                raise AlgebraSyntaxError(f"unsupported format {line!r}", lineno)
        elif head in ("vertex", "vertices"):
            if not rest:
                raise AlgebraSyntaxError("vertex line needs at least one name", lineno)
            for name in rest:
                if name in vertices:
                    raise AlgebraSyntaxError(f"duplicate vertex {name!r}", lineno)
                vertices.append(name)
        elif head == "arrow":
            if len(rest) != 3:
                raise AlgebraSyntaxError("arrow line needs: name src tgt", lineno)
            arrow_rows.append((lineno, *rest))
        elif head == "relation":
            if not rest:
                raise AlgebraSyntaxError("empty relation", lineno)
            relation_rows.append((lineno, rest))
        elif head == "field":
            if len(rest) != 1:
                raise AlgebraSyntaxError("field line needs one number", lineno)
            try:
                p = int(rest[0])
            except ValueError:
                raise AlgebraSyntaxError(f"bad field size {rest[0]!r}", lineno)
        else:
            raise AlgebraSyntaxError(f"unknown directive {head!r}", lineno)

    if p is None:
        p = default_p
    if not _is_prime(p):
        raise NonPrimeField(f"field size {p} is not prime")

    vidx = {v: i for i, v in enumerate(vertices)}
    arrows: list[Arrow] = []
    by_name: dict[str, Arrow] = {}
    for lineno, name, src, tgt in arrow_rows:
        if src not in vidx or tgt not in vidx:
            raise UndefinedArrow(
                f"line {lineno}: arrow {name!r} uses an undeclared vertex"
            )
        if name in by_name:
            raise AlgebraSyntaxError(f"duplicate arrow {name!r}", lineno)
        arrow = Arrow(name, vidx[src], vidx[tgt])
        by_name[name] = arrow
        arrows.append(arrow)
    aindex = {a.name: i for i, a in enumerate(arrows)}

    relations: list[Relation] = []
    for lineno, tokens in relation_rows:
        terms: list[tuple[int, tuple[int, ...]]] = []
        sign = 1
        expect_term = True
        for tok in tokens:
            if tok in ("+", "-"):
                if expect_term:
                    raise AlgebraSyntaxError("misplaced sign in relation", lineno)
                sign = 1 if tok == "+" else -1
                expect_term = True
                continue
            if not expect_term:
                raise AlgebraSyntaxError("missing + or - between terms", lineno)
            coeff, path = _parse_term(tok, lineno, by_name, aindex)
            terms.append(((sign * coeff) % p, path))
            expect_term = False
        if expect_term:
            raise AlgebraSyntaxError("relation ends with a dangling sign", lineno)
        terms = [(c, path) for c, path in terms if c % p]
        if terms:
            relations.append(tuple(terms))

    return AlgebraSpec(tuple(vertices), tuple(arrows), tuple(relations), p)


def parse_algebra_file(path, default_p: int = 2) -> AlgebraSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_algebra(fh.read(), default_p=default_p)
