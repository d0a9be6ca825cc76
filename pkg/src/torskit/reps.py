"""Exact operations on quiver representations over F_p.

A representation assigns a vector space F_p^{d_v} to each vertex and, to an
arrow a: i -> j, a matrix of shape (d_j, d_i) acting on the left.  Relation
paths compose right to left; the tuple (a, b) means apply a first.

The Auslander-Reiten translate is computed through a minimal projective
presentation and the transpose: tau M = D Tr M and tau^{-1} M = Tr D M,
where D is vector-space duality into the opposite algebra and Tr applies
Hom(-, algebra) to the presentation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import fp
from .algebra import AlgebraSpec
from .errors import CapExceeded, EndTooLarge, HomTooLarge, NotHereditary


class Rep:
    """A finite-dimensional representation of a bound quiver algebra."""

    __slots__ = ("algebra", "dims", "mats")

    def __init__(
        self,
        algebra: AlgebraSpec,
        dims: tuple[int, ...],
        mats: tuple[np.ndarray, ...],
        check: bool = True,
    ):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        fixed = []
        for a_idx, arrow in enumerate(algebra.arrows):
            m = np.asarray(mats[a_idx], dtype=np.int64) % algebra.p
            expect = (self.dims[arrow.tgt], self.dims[arrow.src])
            if m.shape != expect:
                m = m.reshape(expect)
            m.flags.writeable = False
            fixed.append(m)
        self.mats = tuple(fixed)
        if check:
            for rel in algebra.relations:
                acc = None
                for coeff, path in rel:
                    term = coeff * self.path_matrix(path)
                    acc = term if acc is None else acc + term
                if acc is not None and (acc % algebra.p).any():
                    raise ValueError("representation does not satisfy the relations")

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @property
    def is_zero(self) -> bool:
        return self.total_dim == 0

    def path_matrix(self, path: tuple[int, ...]) -> np.ndarray:
        """Product of arrow matrices along a path, first entry applied first."""
        if not path:
            raise ValueError("empty path has no unique source")
        src = self.algebra.arrows[path[0]].src
        m = fp.eye(self.dims[src])
        for a_idx in path:
            m = (self.mats[a_idx] @ m) % self.algebra.p
        return m

    def dim_vector_str(self) -> str:
        return "(" + ",".join(str(d) for d in self.dims) + ")"

    def key(self) -> tuple:
        """Deterministic sort key: total dim, dim vector, matrix bytes."""
        return (
            self.total_dim,
            self.dims,
            tuple(fp.matrix_key(m) for m in self.mats),
        )

    def __repr__(self):
        return f"Rep{self.dims}"


def zero_rep(algebra: AlgebraSpec) -> Rep:
    nv = algebra.num_vertices
    dims = (0,) * nv
    mats = tuple(
        fp.zeros(0, 0) for _ in algebra.arrows
    )
    return Rep(algebra, dims, mats, check=False)


def simple_rep(algebra: AlgebraSpec, vertex: int) -> Rep:
    dims = tuple(1 if v == vertex else 0 for v in range(algebra.num_vertices))
    mats = tuple(
        fp.zeros(dims[a.tgt], dims[a.src]) for a in algebra.arrows
    )
    return Rep(algebra, dims, mats, check=False)


def direct_sum(algebra: AlgebraSpec, reps: list[Rep]) -> Rep:
    if not reps:
        return zero_rep(algebra)
    nv = algebra.num_vertices
    dims = tuple(sum(r.dims[v] for r in reps) for v in range(nv))
    mats = []
    for a_idx in range(len(algebra.arrows)):
        blocks = [r.mats[a_idx] for r in reps]
        a = algebra.arrows[a_idx]
        m = fp.zeros(dims[a.tgt], dims[a.src])
        ro = co = 0
        for b, r in zip(blocks, reps):
            m[ro : ro + r.dims[a.tgt], co : co + r.dims[a.src]] = b
            ro += r.dims[a.tgt]
            co += r.dims[a.src]
        mats.append(m)
    return Rep(algebra, dims, tuple(mats), check=False)


def dual_rep(rep: Rep) -> Rep:
    """Vector-space dual, a representation of the opposite algebra."""
    op = rep.algebra.op
    mats = []
    for a_idx, arrow in enumerate(op.arrows):
        # the op arrow a: j -> i transposes the original a: i -> j
        mats.append(rep.mats[a_idx].T.copy())
    return Rep(op, rep.dims, tuple(mats), check=False)


# -- Hom spaces ----------------------------------------------------------------


def hom_basis(algebra: AlgebraSpec, m: Rep, n: Rep) -> list[tuple[np.ndarray, ...]]:
    """Basis of Hom(m, n): tuples f with f_t m_a = n_a f_s for each arrow a."""
    p = algebra.p
    nv = algebra.num_vertices
    offsets = [0]
    for v in range(nv):
        offsets.append(offsets[-1] + n.dims[v] * m.dims[v])
    unknowns = offsets[-1]
    rows = []
    for a_idx, arrow in enumerate(algebra.arrows):
        s, t = arrow.src, arrow.tgt
        nrows = n.dims[t] * m.dims[s]
        if nrows == 0:
            continue
        block = fp.zeros(nrows, unknowns)
        # f_t (n.dims[t] x m.dims[t]) composed with m_a
        if n.dims[t] and m.dims[t]:
            block[:, offsets[t] : offsets[t + 1]] += fp.kron_left(
                m.mats[a_idx], n.dims[t]
            )
        # n_a composed with f_s (n.dims[s] x m.dims[s])
        if n.dims[s] and m.dims[s]:
            block[:, offsets[s] : offsets[s + 1]] -= fp.kron_right(
                n.mats[a_idx], m.dims[s]
            )
        rows.append(block % p)
    if unknowns == 0:
        return []
    system = fp.stack_rows(rows, unknowns)
    kernel = fp.nullspace(system, p) if system.size else fp.eye(unknowns)
    out = []
    for vec in kernel:
        f = tuple(
            vec[offsets[v] : offsets[v + 1]].reshape(n.dims[v], m.dims[v])
            for v in range(nv)
        )
        out.append(f)
    return out


def hom_dim(algebra: AlgebraSpec, m: Rep, n: Rep) -> int:
    return len(hom_basis(algebra, m, n))


def hom_elements(algebra: AlgebraSpec, m: Rep, n: Rep, cap: int = 4096):
    """All elements of Hom(m, n), zero first; raises HomTooLarge over the cap."""
    basis = hom_basis(algebra, m, n)
    p = algebra.p
    if p ** len(basis) > cap:
        raise HomTooLarge(f"p^{len(basis)} homomorphisms exceed cap {cap}")
    nv = algebra.num_vertices
    for coeffs in fp.all_vectors(len(basis), p):
        f = tuple(fp.zeros(n.dims[v], m.dims[v]) for v in range(nv))
        for c, b in zip(coeffs, basis):
            if c:
                f = tuple((fv + c * bv) % p for fv, bv in zip(f, b))
        yield f


def is_invertible_hom(f: tuple[np.ndarray, ...], p: int) -> bool:
    return all(
        fv.shape[0] == fv.shape[1] and fp.is_invertible(fv, p) for fv in f
    )


def is_isomorphic(algebra: AlgebraSpec, m: Rep, n: Rep, cap: int = 4096) -> bool:
    """True iff some F_p combination of a Hom basis is invertible vertexwise."""
    if m.dims != n.dims:
        return False
    if m.is_zero:
        return True
    for f in hom_elements(algebra, m, n, cap=cap):
        if is_invertible_hom(f, algebra.p):
            return True
    return False


def end_is_brick(algebra: AlgebraSpec, m: Rep, cap: int = 4096) -> bool:
    """True iff End(m) is a division ring: every nonzero endo is invertible."""
    if m.is_zero:
        return False
    basis = hom_basis(algebra, m, m)
    if len(basis) == 1:
        return True
    p = algebra.p
    if p ** len(basis) > cap:
        raise EndTooLarge(f"p^{len(basis)} endomorphisms exceed cap {cap}")
    for f in hom_elements(algebra, m, m, cap=cap):
        if all(not fv.any() for fv in f):
            continue
        if not is_invertible_hom(f, p):
            return False
    return True


# -- subspaces, submodules, quotients ------------------------------------------


def all_subspaces(dim: int, p: int) -> list[np.ndarray]:
    """All subspaces of F_p^dim as reduced-row-echelon basis matrices."""
    out = [fp.zeros(0, dim)]
    for r in range(1, dim + 1):
        for pivots in itertools.combinations(range(dim), r):
            free_cells = [
                (row, col)
                for row, pc in enumerate(pivots)
                for col in range(pc + 1, dim)
                if col not in pivots
            ]
            for fill in fp.all_vectors(len(free_cells), p):
                m = fp.zeros(r, dim)
                for row, pc in enumerate(pivots):
                    m[row, pc] = 1
                for val, (row, col) in zip(fill, free_cells):
                    m[row, col] = val
                out.append(m)
    return out


Subspaces = tuple[np.ndarray, ...]  # one rref basis matrix (rows) per vertex


def sub_rep(algebra: AlgebraSpec, m: Rep, subspaces: Subspaces) -> Rep:
    """The subrepresentation spanned by arrow-stable subspaces, in its own basis."""
    p = algebra.p
    dims = tuple(u.shape[0] for u in subspaces)
    mats = []
    for a_idx, arrow in enumerate(algebra.arrows):
        u_s, u_t = subspaces[arrow.src], subspaces[arrow.tgt]
        image = (m.mats[a_idx] @ u_s.T) % p  # columns: images of the basis rows
        coords = fp.zeros(dims[arrow.tgt], dims[arrow.src])
        for c in range(image.shape[1]):
            sol = fp.solve(u_t.T, image[:, c], p)
            if sol is None:
                raise ValueError("subspaces are not arrow-stable")
            coords[:, c] = sol
        mats.append(coords)
    return Rep(algebra, dims, tuple(mats), check=False)


def quotient_rep(algebra: AlgebraSpec, m: Rep, subspaces: Subspaces) -> Rep:
    """Quotient of m by an arrow-stable subspace tuple."""
    p = algebra.p
    nv = algebra.num_vertices
    proj = []
    lift = []
    for v in range(nv):
        u = subspaces[v]
        d, r = m.dims[v], u.shape[0]
        comp = []
        base = u.copy()
        for e in range(d):
            vec = fp.zeros(1, d)
            vec[0, e] = 1
            cand = np.concatenate([base, vec], axis=0)
            if fp.rank(cand, p) > base.shape[0]:
                base = cand
                comp.append(vec[0])
        w = np.array(comp, dtype=np.int64) if comp else fp.zeros(0, d)
        full = np.concatenate([u, w], axis=0)  # rows form a basis of F_p^d
        inv = fp.inv_matrix(full.T, p)
        proj.append(inv[r:, :] if inv is not None else fp.zeros(d - r, d))
        lift.append(w)
    dims = tuple(proj[v].shape[0] for v in range(nv))
    mats = []
    for a_idx, arrow in enumerate(algebra.arrows):
        s, t = arrow.src, arrow.tgt
        mats.append((proj[t] @ m.mats[a_idx] @ lift[s].T) % p)
    return Rep(algebra, dims, tuple(mats), check=False)


def submodule_subspaces(
    algebra: AlgebraSpec, m: Rep, cap: int = 1 << 20
) -> list[Subspaces]:
    """All arrow-stable vertexwise subspace tuples of m."""
    p = algebra.p
    if p ** m.total_dim > cap:
        raise CapExceeded(
            f"p^{m.total_dim} exceeds the submodule enumeration cap {cap}"
        )
    per_vertex = [all_subspaces(d, p) for d in m.dims]
    out = []
    for combo in itertools.product(*per_vertex):
        ok = True
        for a_idx, arrow in enumerate(algebra.arrows):
            u_s, u_t = combo[arrow.src], combo[arrow.tgt]
            if u_s.shape[0] == 0:
                continue
            image = (m.mats[a_idx] @ u_s.T) % p
            span = fp.row_basis(u_t, p)
            stacked = np.concatenate([span, image.T], axis=0)
            if fp.rank(stacked, p) != span.shape[0]:
                ok = False
                break
        if ok:
            out.append(combo)
    return out


def submodules(algebra: AlgebraSpec, m: Rep, cap: int = 1 << 20):
    """All submodules as (subspaces, embedded Rep) pairs."""
    return [
        (spaces, sub_rep(algebra, m, spaces))
        for spaces in submodule_subspaces(algebra, m, cap=cap)
    ]


def subspaces_dims(subspaces: Subspaces) -> tuple[int, ...]:
    return tuple(u.shape[0] for u in subspaces)


def kernel_subspaces(f: tuple[np.ndarray, ...], p: int) -> Subspaces:
    return tuple(fp.nullspace(fv, p) for fv in f)


def image_subspaces(f: tuple[np.ndarray, ...], p: int) -> Subspaces:
    return tuple(fp.row_basis(fv.T, p) for fv in f)


def kernel_rep(algebra: AlgebraSpec, f, m: Rep) -> Rep:
    return sub_rep(algebra, m, kernel_subspaces(f, algebra.p))


def image_rep(algebra: AlgebraSpec, f, n: Rep) -> Rep:
    return sub_rep(algebra, n, image_subspaces(f, algebra.p))


def cokernel_rep(algebra: AlgebraSpec, f, n: Rep) -> Rep:
    return quotient_rep(algebra, n, image_subspaces(f, algebra.p))


# -- trace and reject -----------------------------------------------------------


def trace_subspaces(algebra: AlgebraSpec, generators: list[Rep], x: Rep) -> Subspaces:
    """Sum of images of all homomorphisms from the generators into x."""
    p = algebra.p
    nv = algebra.num_vertices
    cols = [[] for _ in range(nv)]
    for g in generators:
        for f in hom_basis(algebra, g, x):
            for v in range(nv):
                if f[v].size:
                    cols[v].append(f[v].T)
    return tuple(
        fp.row_basis(fp.stack_rows(cols[v], x.dims[v]), p) for v in range(nv)
    )


def is_in_gen(algebra: AlgebraSpec, generators: list[Rep], x: Rep) -> bool:
    return subspaces_dims(trace_subspaces(algebra, generators, x)) == x.dims


def reject_subspaces(algebra: AlgebraSpec, cogenerators: list[Rep], x: Rep) -> Subspaces:
    """Intersection of kernels of all maps from x into the cogenerators."""
    p = algebra.p
    nv = algebra.num_vertices
    rows = [[] for _ in range(nv)]
    for w in cogenerators:
        for f in hom_basis(algebra, x, w):
            for v in range(nv):
                if f[v].size:
                    rows[v].append(f[v])
    return tuple(
        fp.nullspace(fp.stack_rows(rows[v], x.dims[v]), p) for v in range(nv)
    )


def is_in_cogen(algebra: AlgebraSpec, cogenerators: list[Rep], x: Rep) -> bool:
    reject = reject_subspaces(algebra, cogenerators, x)
    return all(u.shape[0] == 0 for u in reject)


# -- Ext^1 and extensions --------------------------------------------------------


@dataclass
class ExtSpace:
    """Ext^1(m, n): classes of exact sequences 0 -> n -> X -> m -> 0.

    Cocycles are arrow-indexed matrix tuples eta with eta_a of the same shape
    as an arrow matrix of the glued representation block; coboundaries come
    from vertexwise maps m -> n.
    """

    m: Rep
    n: Rep
    cocycle_basis: list
    coboundary_rank: int
    class_reps: list  # coset representatives spanning a complement

    @property
    def dim(self) -> int:
        return len(self.class_reps)


def ext_space(algebra: AlgebraSpec, m: Rep, n: Rep) -> ExtSpace:
    p = algebra.p
    nv = algebra.num_vertices
    arrows = algebra.arrows
    offsets = [0]
    for a in arrows:
        offsets.append(offsets[-1] + n.dims[a.tgt] * m.dims[a.src])
    unknowns = offsets[-1]

    rows = []
    for rel in algebra.relations:
        src = arrows[rel[0][1][0]].src
        tgt = arrows[rel[0][1][-1]].tgt
        nrows = n.dims[tgt] * m.dims[src]
        if nrows == 0:
            continue
        block = fp.zeros(nrows, unknowns)
        for coeff, path in rel:
            for k, a_idx in enumerate(path):
                prefix, suffix = path[:k], path[k + 1 :]
                pm = m.path_matrix(prefix) if prefix else fp.eye(m.dims[arrows[a_idx].src])
                sm = n.path_matrix(suffix) if suffix else fp.eye(n.dims[arrows[a_idx].tgt])
                if 0 in pm.shape or 0 in sm.shape:
                    continue
                block[:, offsets[a_idx] : offsets[a_idx + 1]] += coeff * np.kron(
                    sm, pm.T
                )
        rows.append(block % p)

    if unknowns == 0:
        cocycles = fp.zeros(0, 0)
    elif rows:
        cocycles = fp.nullspace(fp.stack_rows(rows, unknowns), p)
    else:
        cocycles = fp.eye(unknowns)

    # coboundaries: eta_a = f_t m_a - n_a f_s over vertexwise maps f
    c0_offsets = [0]
    for v in range(nv):
        c0_offsets.append(c0_offsets[-1] + n.dims[v] * m.dims[v])
    d0 = fp.zeros(unknowns, c0_offsets[-1])
    for a_idx, a in enumerate(arrows):
        s, t = a.src, a.tgt
        if n.dims[t] and m.dims[s]:
            if m.dims[t]:
                d0[offsets[a_idx] : offsets[a_idx + 1], c0_offsets[t] : c0_offsets[t + 1]] += (
                    fp.kron_left(m.mats[a_idx], n.dims[t])
                )
            if n.dims[s]:
                d0[offsets[a_idx] : offsets[a_idx + 1], c0_offsets[s] : c0_offsets[s + 1]] -= (
                    fp.kron_right(n.mats[a_idx], m.dims[s])
                )
    d0 %= p
    cob_basis = fp.row_basis(d0.T, p) if d0.size else fp.zeros(0, unknowns)

    # extend the coboundary space to the cocycle space; the added vectors
    # represent a basis of Ext^1
    reps = []
    span = cob_basis
    for vec in cocycles:
        cand = np.concatenate([span, vec.reshape(1, -1)], axis=0)
        if fp.rank(cand, p) > span.shape[0]:
            span = cand
            reps.append(vec)

    def unflatten(vec):
        return tuple(
            vec[offsets[a_idx] : offsets[a_idx + 1]].reshape(
                n.dims[a.tgt], m.dims[a.src]
            )
            for a_idx, a in enumerate(arrows)
        )

    return ExtSpace(
        m=m,
        n=n,
        cocycle_basis=[unflatten(v) for v in cocycles],
        coboundary_rank=int(cob_basis.shape[0]),
        class_reps=[unflatten(v) for v in reps],
    )


def ext_dim(algebra: AlgebraSpec, m: Rep, n: Rep) -> int:
    return ext_space(algebra, m, n).dim


def ext_classes(algebra: AlgebraSpec, ext: ExtSpace, nonzero_only: bool = True, cap: int = 4096):
    """Cocycle representatives of the classes in Ext^1, one per class."""
    p = algebra.p
    if p ** ext.dim > cap:
        raise CapExceeded(f"p^{ext.dim} extension classes exceed cap {cap}")
    arrows = ext.class_reps
    for coeffs in fp.all_vectors(ext.dim, p):
        if nonzero_only and not coeffs.any():
            continue
        eta = None
        for c, basis_eta in zip(coeffs, arrows):
            scaled = tuple((c * e) % p for e in basis_eta)
            if eta is None:
                eta = scaled
            else:
                eta = tuple((x + y) % p for x, y in zip(eta, scaled))
        if eta is None:
            eta = tuple(
                fp.zeros(ext.n.dims[a.tgt], ext.m.dims[a.src])
                for a in algebra.arrows
            )
        yield eta


def middle_term(algebra: AlgebraSpec, ext: ExtSpace, eta) -> Rep:
    """The extension 0 -> n -> X -> m -> 0 attached to a cocycle eta."""
    m, n = ext.m, ext.n
    dims = tuple(n.dims[v] + m.dims[v] for v in range(algebra.num_vertices))
    mats = []
    for a_idx, a in enumerate(algebra.arrows):
        big = fp.zeros(dims[a.tgt], dims[a.src])
        big[: n.dims[a.tgt], : n.dims[a.src]] = n.mats[a_idx]
        big[: n.dims[a.tgt], n.dims[a.src] :] = eta[a_idx]
        big[n.dims[a.tgt] :, n.dims[a.src] :] = m.mats[a_idx]
        mats.append(big)
    return Rep(algebra, dims, tuple(mats))


# -- radical, projective covers, AR translation ---------------------------------


def radical_subspaces(algebra: AlgebraSpec, m: Rep) -> Subspaces:
    p = algebra.p
    nv = algebra.num_vertices
    cols = [[] for _ in range(nv)]
    for a_idx, a in enumerate(algebra.arrows):
        if m.mats[a_idx].size:
            cols[a.tgt].append(m.mats[a_idx].T)
    return tuple(
        fp.row_basis(fp.stack_rows(cols[v], m.dims[v]), p) for v in range(nv)
    )


def top_dims(algebra: AlgebraSpec, m: Rep) -> tuple[int, ...]:
    rad = radical_subspaces(algebra, m)
    return tuple(m.dims[v] - rad[v].shape[0] for v in range(algebra.num_vertices))


def projective_cover(algebra: AlgebraSpec, m: Rep):
    """Minimal projective cover: (cover Rep, vertex list, map onto m).

    The map is a vertexwise matrix tuple from the sum of projectives at the
    listed vertices onto m; generators lift a basis of the top of m.
    """
    p = algebra.p
    nv = algebra.num_vertices
    rad = radical_subspaces(algebra, m)
    gens: list[tuple[int, np.ndarray]] = []
    for v in range(nv):
        base = rad[v]
        for e in range(m.dims[v]):
            vec = fp.zeros(1, m.dims[v])
            vec[0, e] = 1
            cand = np.concatenate([base, vec], axis=0)
            if fp.rank(cand, p) > base.shape[0]:
                base = cand
                gens.append((v, vec[0]))
    vertex_list = [v for v, _ in gens]
    cover = direct_sum(algebra, [algebra.projectives[v] for v in vertex_list])
    basis = algebra.basis
    f = [fp.zeros(m.dims[v], cover.dims[v]) for v in range(nv)]
    col_offsets = [0] * nv
    for v, gen in gens:
        for j in range(nv):
            for path in basis.proj_paths(v, j):
                col = col_offsets[j]
                if path:
                    val = (m.path_matrix(path) @ gen) % p
                else:
                    val = gen
                f[j][:, col] = val
                col_offsets[j] += 1
    return cover, vertex_list, tuple(f)


def minimal_presentation(algebra: AlgebraSpec, m: Rep):
    """Projective presentation P1 -> P0 -> m -> 0 with both covers minimal."""
    p = algebra.p
    p0, v0, pi = projective_cover(algebra, m)
    ker_spaces = kernel_subspaces(pi, p)
    k = sub_rep(algebra, p0, ker_spaces)
    p1, v1, onto_k = projective_cover(algebra, k)
    # compose with the inclusion of the kernel into p0
    f = tuple(
        (ker_spaces[v].T @ onto_k[v]) % p for v in range(algebra.num_vertices)
    )
    return p1, v1, p0, v0, f


def transpose_rep(algebra: AlgebraSpec, m: Rep) -> Rep:
    """Tr m as a representation of the opposite algebra."""
    op = algebra.op
    p = algebra.p
    if m.is_zero:
        return zero_rep(op)
    p1, v1, p0, v0, f = minimal_presentation(algebra, m)
    if not v1:
        return zero_rep(op)

    basis = algebra.basis
    op_basis = op.basis

    # entry (q, r): the path element of f restricted to P(v1[q]) -> P(v0[r]),
    # read off at the trivial path of P(v1[q]) and re-expressed op-side
    p0_offsets: list[list[int]] = []
    acc = [0] * algebra.num_vertices
    for r, i in enumerate(v0):
        p0_offsets.append(list(acc))
        for j in range(algebra.num_vertices):
            acc[j] += len(basis.proj_paths(i, j))
    p1_offsets: list[list[int]] = []
    acc = [0] * algebra.num_vertices
    for q, j in enumerate(v1):
        p1_offsets.append(list(acc))
        for jj in range(algebra.num_vertices):
            acc[jj] += len(basis.proj_paths(j, jj))

    u: dict[tuple[int, int], dict[tuple[int, ...], int]] = {}
    for q, jq in enumerate(v1):
        paths_q = basis.proj_paths(jq, jq)
        triv_col = p1_offsets[q][jq] + paths_q.index(())
        column = f[jq][:, triv_col]
        for r, ir in enumerate(v0):
            paths_r = basis.proj_paths(ir, jq)
            off = p0_offsets[r][jq]
            elem: dict[tuple[int, ...], int] = {}
            for c, path in enumerate(paths_r):
                coeff = int(column[off + c]) % p
                if coeff:
                    # re-express the reversed path in the opposite basis
                    for op_path, op_coeff in op_basis.normal_form(
                        jq, tuple(reversed(path))
                    ).items():
                        elem[op_path] = (elem.get(op_path, 0) + coeff * op_coeff) % p
            u[(q, r)] = {k: v for k, v in elem.items() if v}

    source = direct_sum(op, [op.projectives[i] for i in v0])
    target = direct_sum(op, [op.projectives[j] for j in v1])
    src_offsets: list[list[int]] = []
    acc = [0] * op.num_vertices
    for i in v0:
        src_offsets.append(list(acc))
        for mm in range(op.num_vertices):
            acc[mm] += len(op_basis.proj_paths(i, mm))
    tgt_offsets: list[list[int]] = []
    acc = [0] * op.num_vertices
    for j in v1:
        tgt_offsets.append(list(acc))
        for mm in range(op.num_vertices):
            acc[mm] += len(op_basis.proj_paths(j, mm))

    g = [fp.zeros(target.dims[mm], source.dims[mm]) for mm in range(op.num_vertices)]
    for (q, r), elem in u.items():
        for mm in range(op.num_vertices):
            src_paths = op_basis.proj_paths(v0[r], mm)
            tgt_paths = op_basis.proj_paths(v1[q], mm)
            tgt_pos = {path: k for k, path in enumerate(tgt_paths)}
            for c, x in enumerate(src_paths):
                for u_path, u_coeff in elem.items():
                    for res, res_coeff in op_basis.normal_form(
                        v1[q], u_path + x
                    ).items():
                        row = tgt_offsets[q][mm] + tgt_pos[res]
                        col = src_offsets[r][mm] + c
                        g[mm][row, col] = (g[mm][row, col] + u_coeff * res_coeff) % p
    return cokernel_rep(op, tuple(g), target)


def tau(algebra: AlgebraSpec, m: Rep) -> Rep:
    """Auslander-Reiten translate D Tr; zero exactly on projectives."""
    return dual_rep(transpose_rep(algebra, m))


def tau_inv(algebra: AlgebraSpec, m: Rep) -> Rep:
    """Inverse translate Tr D; zero exactly on injectives."""
    return transpose_rep(algebra.op, dual_rep(m))


def tau_bar(algebra: AlgebraSpec, m: Rep, cap: int = 4096) -> Rep:
    """tau on non-projectives; sends the projective cover of a simple to the
    injective envelope of the same simple.  Hereditary algebras only."""
    if not algebra.is_hereditary:
        raise NotHereditary("tau_bar needs a hereditary algebra")
    t = tau(algebra, m)
    if not t.is_zero:
        return t
    for i in range(algebra.num_vertices):
        if is_isomorphic(algebra, m, algebra.projectives[i], cap=cap):
            return algebra.injectives[i]
    raise ValueError("tau is zero but the module is not an indecomposable projective")


def tau_bar_inv(algebra: AlgebraSpec, m: Rep, cap: int = 4096) -> Rep:
    if not algebra.is_hereditary:
        raise NotHereditary("tau_bar needs a hereditary algebra")
    t = tau_inv(algebra, m)
    if not t.is_zero:
        return t
    for i in range(algebra.num_vertices):
        if is_isomorphic(algebra, m, algebra.injectives[i], cap=cap):
            return algebra.projectives[i]
    raise ValueError("tau_inv is zero but the module is not an indecomposable injective")


def coxeter_matrix(algebra: AlgebraSpec) -> np.ndarray:
    """Integer Coxeter transform: dim tau M = Phi @ dim M for non-projectives.

    Hereditary-only oracle; uses the Cartan matrix over the integers.
    """
    if not algebra.is_hereditary:
        raise NotHereditary("Coxeter matrix needs a hereditary algebra")
    c = algebra.cartan_matrix.astype(np.float64)
    phi = -c.T @ np.linalg.inv(c)
    return np.rint(phi).astype(np.int64)
