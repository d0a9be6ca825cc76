"""Drivers that machine-check the structural theorems on a built fixture.

Each check walks the whole lattice (or a deterministic sample on larger
fixtures), records pass/fail with a minimal witness, and the results are
collected into a `report v1` dict.  Hereditary-only statements are skipped
on bound-quiver fixtures.
"""

from __future__ import annotations

from fractions import Fraction

from . import lattice as lat
from . import tors
from .catalog import Catalog
from .tors import TorsLattice, members


def _sample(items, limit):
    items = list(items)
    if limit is None or len(items) <= limit:
        return items
    step = max(1, len(items) // limit)
    return items[::step][:limit]


def _full(catalog: Catalog) -> int:
    return (1 << catalog.n) - 1


def check_theorem_a(catalog: Catalog, tl: TorsLattice, sample=None):
    """kappa of a brick-generated class is the left perp of the brick, and
    kappa is a CJI to CMI bijection inverted by kappa_star."""
    witnesses = []
    bricks = [b for b in range(catalog.n) if catalog.brick_flags[b]]
    for b in bricks:
        e = tl.element(tors.filt_gen(catalog, b))
        k = lat.kappa(tl.lattice, e)
        if tl.classes[k] != tors.perp_left(catalog, b):
            witnesses.append(f"kappa(T_{catalog.names[b]}) is not perp({catalog.names[b]})")
        if lat.kappa_star(tl.lattice, k) != e:
            witnesses.append(f"kappa_star does not invert kappa at {catalog.names[b]}")
    cji = lat.cji_elements(tl.lattice)
    cmi = lat.cmi_elements(tl.lattice)
    image = sorted(lat.kappa(tl.lattice, j) for j in cji)
    if len(cji) != len(bricks):
        witnesses.append(f"{len(cji)} CJI elements vs {len(bricks)} bricks")
    if image != sorted(cmi):
        witnesses.append("kappa image differs from the CMI set")
    return witnesses


def check_kappa_bar_intersection(catalog: Catalog, tl: TorsLattice, sample=None):
    """Lattice kappa_bar agrees with the intersection of brick left perps."""
    witnesses = []
    for e in range(tl.n):
        kb = lat.kappa_bar(tl.lattice, e)
        if tl.classes[kb] != tors.kappa_bar_rep(catalog, tl.semibrick_of[e]):
            witnesses.append(f"element {tl.class_name(e)}")
    return witnesses


def check_theorem_c(catalog: Catalog, tl: TorsLattice, sample=None):
    """kappa_bar squared replaces every non-injective joinand brick by its
    inverse translate."""
    witnesses = []
    for e in range(tl.n):
        sb = tl.semibrick_of[e]
        if not sb or any(catalog.injective_flags[b] for b in sb):
            continue
        k2 = lat.kappa_bar(tl.lattice, lat.kappa_bar(tl.lattice, e))
        expect = frozenset(catalog.tau_inv_of[b] for b in sb)
        if tl.semibrick_of[k2] != expect:
            witnesses.append(f"element {tl.class_name(e)}")
    return witnesses


def check_theorem_d(catalog: Catalog, tl: TorsLattice, sample=None, alpha_mode="shortcut"):
    """alpha after kappa_bar equals epsilon after alpha, elementwise."""
    witnesses = []
    for e in range(tl.n):
        mask = tl.classes[e]
        a_t = tors.alpha(catalog, mask, tl.semibrick_of[e])
        if alpha_mode in ("definition", "both"):
            a_def = tors.alpha_by_definition(catalog, mask)
            if a_def != a_t:
                witnesses.append(f"alpha definition mismatch at {tl.class_name(e)}")
                continue
            if alpha_mode == "definition":
                a_t = a_def
        kb = lat.kappa_bar(tl.lattice, e)
        lhs = tors.alpha(catalog, tl.classes[kb], tl.semibrick_of[kb])
        rhs = tors.epsilon(catalog, a_t)
        if lhs != rhs:
            witnesses.append(f"element {tl.class_name(e)}")
    return witnesses


def check_theorem_e(catalog: Catalog, tl: TorsLattice, sample=None):
    """Every kappa_bar orbit has average joinand count r/2, exactly."""
    witnesses = []
    r = Fraction(catalog.algebra.num_vertices)
    for orbit in lat.kappa_bar_orbits(tl.lattice):
        if orbit.average != r / 2:
            witnesses.append(
                f"orbit through {tl.class_name(orbit.elements[0])} has average {orbit.average}"
            )
    return witnesses


def check_left_perp(catalog: Catalog, tl: TorsLattice, sample=None):
    """perp(M) is a torsion class, its right perp is FiltCogen M, and M is
    its unique minimal extending module."""
    witnesses = []
    bricks = [b for b in range(catalog.n) if catalog.brick_flags[b]]
    for b in _sample(bricks, sample):
        pl = tors.perp_left(catalog, b)
        if pl not in tl.element_of:
            witnesses.append(f"perp({catalog.names[b]}) is not a torsion class")
            continue
        if tors.perp_right(catalog, members(pl)) != tors.filt_cogen(catalog, b):
            witnesses.append(f"(perp {catalog.names[b]})^perp is not FiltCogen")
        me = tors.minimal_extending_set(catalog, pl)
        if me != frozenset([b]):
            witnesses.append(f"ME(perp {catalog.names[b]}) is {sorted(me)}")
    return witnesses


def check_me_semibrick(catalog: Catalog, tl: TorsLattice, sample=None):
    """The minimal extending modules of an intersection of brick perps are
    exactly the bricks themselves."""
    witnesses = []
    for e in _sample(range(tl.n), sample):
        sb = tl.semibrick_of[e]
        mask = tors.kappa_bar_rep(catalog, sb)
        me = tors.minimal_extending_set(catalog, mask)
        if me != sb:
            witnesses.append(f"semibrick {sorted(catalog.names[b] for b in sb)}")
    return witnesses


def check_simple_coext(catalog: Catalog, tl: TorsLattice, sample=None):
    """Simple objects of alpha(T) are the minimal co-extending modules of
    the torsion-free class T^perp."""
    witnesses = []
    for e in _sample(range(tl.n), sample):
        mask = tl.classes[e]
        w = tors.alpha(catalog, mask, tl.semibrick_of[e])
        simples = tors.simple_objects(catalog, w)
        f_mask = tors.perp_right(catalog, members(mask))
        coext = tors.minimal_coextending_set(catalog, f_mask)
        if simples != coext or simples != tl.semibrick_of[e]:
            witnesses.append(f"element {tl.class_name(e)}")
    return witnesses


def check_wide_many_perp(catalog: Catalog, tl: TorsLattice, sample=None):
    """alpha of an intersection of brick perps is the intersection of the
    alpha images."""
    witnesses = []
    for e in _sample(range(tl.n), sample):
        sb = tl.semibrick_of[e]
        if not sb:
            continue
        mask = tors.kappa_bar_rep(catalog, sb)
        lhs = tors.alpha(catalog, mask, tl.semibrick_of[tl.element(mask)])
        rhs = _full(catalog)
        for b in sb:
            pl = tors.perp_left(catalog, b)
            rhs &= tors.alpha(catalog, pl, tl.semibrick_of[tl.element(pl)])
        if lhs != rhs:
            witnesses.append(f"semibrick {sorted(catalog.names[b] for b in sb)}")
    return witnesses


def check_label_transfer(catalog: Catalog, tl: TorsLattice, sample=None):
    """Lower-cover labels of T form its semibrick and reappear as the
    upper-cover labels of kappa_bar(T)."""
    witnesses = []
    lower = {e: set() for e in range(tl.n)}
    upper = {e: set() for e in range(tl.n)}
    for (lo, hi), b in tl.labels.items():
        lower[hi].add(b)
        upper[lo].add(b)
    for e in range(tl.n):
        if lower[e] != set(tl.semibrick_of[e]):
            witnesses.append(f"lower labels of {tl.class_name(e)} differ from semibrick")
        kb = lat.kappa_bar(tl.lattice, e)
        if upper[kb] != set(tl.semibrick_of[e]):
            witnesses.append(f"upper labels of kappa_bar({tl.class_name(e)}) differ")
    return witnesses


def check_antiso(catalog: Catalog, tl: TorsLattice, sample=None):
    """Taking right perps reverses inclusions of torsion classes."""
    witnesses = []
    perps = [tors.perp_right(catalog, members(m)) for m in tl.classes]
    for e in range(tl.n):
        for f in range(tl.n):
            sub = (tl.classes[e] & ~tl.classes[f]) == 0
            anti = (perps[f] & ~perps[e]) == 0
            if sub != anti:
                witnesses.append(f"pair ({tl.class_name(e)}, {tl.class_name(f)})")
                break
        if witnesses:
            break
    return witnesses


def check_semidistributive(catalog: Catalog, tl: TorsLattice, sample=None):
    ok, witness = lat.is_semidistributive(tl.lattice)
    return [] if ok else [f"violation {witness}"]


def check_appendix(catalog: Catalog, tl: TorsLattice, sample=None):
    """perp(M) ∩ (tau^{-1}M)^perp and M^perp ∩ perp(tau M) are wide for every
    module; over a hereditary algebra the left one is alpha(perp M) = perp01(M)
    for bricks."""
    witnesses = []
    for m in range(catalog.n):
        left = tors.appendix_wide_left(catalog, m)
        right = tors.appendix_wide_right(catalog, m)
        if not tors.wide_check(catalog, left):
            witnesses.append(f"perp/tau-inv intersection at {catalog.names[m]} not wide")
        if not tors.wide_check(catalog, right):
            witnesses.append(f"perp/tau intersection at {catalog.names[m]} not wide")
        if catalog.algebra.is_hereditary and catalog.brick_flags[m]:
            pl = tors.perp_left(catalog, m)
            a = tors.alpha(catalog, pl, tl.semibrick_of[tl.element(pl)])
            if not (left == a == tors.perp01_left(catalog, m)):
                witnesses.append(f"hereditary collapse fails at {catalog.names[m]}")
    return witnesses


CHECKS = {
    "A": (check_theorem_a, False),
    "kappa_tors": (check_kappa_bar_intersection, False),
    "C": (check_theorem_c, True),
    "D": (check_theorem_d, True),
    "E": (check_theorem_e, False),
    "left_perp": (check_left_perp, False),
    "me_semibrick": (check_me_semibrick, False),
    "simple_coext": (check_simple_coext, False),
    "wide_many_perp": (check_wide_many_perp, True),
    "label_transfer": (check_label_transfer, False),
    "antiso": (check_antiso, False),
    "semidistributive": (check_semidistributive, False),
    "appendix": (check_appendix, False),
}

# exact everywhere up to this lattice size; larger fixtures get sampled
EXACT_LIMIT = 20
SAMPLE_SIZE = 5
SAMPLED_CHECKS = {"left_perp", "me_semibrick", "simple_coext"}


def verify_theorems(
    catalog: Catalog,
    tl: TorsLattice,
    theorems: list[str] | None = None,
    fixture: str = "",
    alpha_mode: str | None = None,
) -> dict:
    """Run the requested checks and return a `report v1` dict."""
    requested = list(CHECKS) if theorems is None else list(theorems)
    results = []
    for name in requested:
        if name not in CHECKS:
            results.append(
                {"name": name, "status": "fail", "witnesses": [f"unknown theorem {name}"]}
            )
            continue
        func, hereditary_only = CHECKS[name]
        if hereditary_only and not catalog.algebra.is_hereditary:
            results.append(
                {"name": name, "status": "skipped", "witnesses": [],
                 "detail": "needs a hereditary algebra"}
            )
            continue
        sample = SAMPLE_SIZE if (name in SAMPLED_CHECKS and tl.n > EXACT_LIMIT) else None
        kwargs = {}
        if name == "D":
            kwargs["alpha_mode"] = alpha_mode or (
                "both" if tl.n <= EXACT_LIMIT else "shortcut"
            )
        witnesses = func(catalog, tl, sample=sample, **kwargs)
        results.append(
            {
                "name": name,
                "status": "pass" if not witnesses else "fail",
                "witnesses": witnesses,
            }
        )
    orbits = [
        {
            "elements": [tl.class_name(e) for e in orbit.elements],
            "joinand_counts": list(orbit.joinand_counts),
            "average": str(orbit.average),
        }
        for orbit in lat.kappa_bar_orbits(tl.lattice)
    ]
    return {
        "format": "report v1",
        "fixture": fixture,
        "assumptions": [
            "representation-finite fixture: every torsion class has a semibrick "
            "canonical join representation, so kappa_bar is total"
        ],
        "counts": {
            "simples": catalog.algebra.num_vertices,
            "indecomposables": catalog.n,
            "bricks": sum(catalog.brick_flags),
            "torsion_classes": tl.n,
            "cover_edges": len(tl.lattice.cover_edges),
        },
        "theorems": results,
        "orbits": orbits,
    }


def report_passed(report: dict) -> bool:
    return all(t["status"] != "fail" for t in report["theorems"])
