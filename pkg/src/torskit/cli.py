"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 budget or cap exceeded, 4 failed
theorem verification.  All flags are long-form; the only environment knob is
TORSKIT_BUDGET, which overrides the enumeration caps.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import lattice as lat
from . import tors, verify
from .algebra import AlgebraSpec, parse_algebra_file
from .catalog import Caps, Catalog, enumerate_indecomposables
from .errors import (
    AlgebraSyntaxError,
    BudgetExceeded,
    CapExceeded,
    EndTooLarge,
    HomTooLarge,
    IncompleteCatalog,
    NonAdmissibleRelation,
    NonParallelRelation,
    NonPrimeField,
    TorskitError,
    UndefinedArrow,
)

class UsageError(TorskitError):
    """Bad command-line input (unknown module name, out-of-range element)."""


PARSE_ERRORS = (
    AlgebraSyntaxError,
    UndefinedArrow,
    NonParallelRelation,
    NonAdmissibleRelation,
    NonPrimeField,
    UsageError,
    OSError,
)
BUDGET_ERRORS = (BudgetExceeded, CapExceeded, EndTooLarge, HomTooLarge, IncompleteCatalog)


def _caps() -> Caps:
    budget = os.environ.get("TORSKIT_BUDGET")
    if budget:
        value = int(budget)
        if value <= 0:
            raise CapExceeded("TORSKIT_BUDGET must be positive")
        return Caps(end=value, ext=value, hom=value, search=max(value, 1 << 22))
    return Caps()


def _load(args) -> tuple[AlgebraSpec, Catalog]:
    algebra = parse_algebra_file(args.spec)
    if args.field is not None:
        algebra = AlgebraSpec(
            algebra.vertices, algebra.arrows, algebra.relations, p=args.field
        )
    dim_cap = None
    if args.dim_cap:
        dim_cap = tuple(int(x) for x in args.dim_cap.split(","))
        if len(dim_cap) != algebra.num_vertices or any(c <= 0 for c in dim_cap):
            raise CapExceeded("--dim-cap needs one positive entry per vertex")
    catalog = enumerate_indecomposables(algebra, dim_cap=dim_cap, caps=_caps())
    return algebra, catalog


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def tors_dump(tl: tors.TorsLattice) -> dict:
    catalog = tl.catalog
    elements = [
        {
            "id": e,
            "members": [catalog.names[i] for i in tors.members(mask)],
            "member_indices": tors.members(mask),
            "semibrick": sorted(catalog.names[b] for b in tl.semibrick_of[e]),
        }
        for e, mask in enumerate(tl.classes)
    ]
    covers = [
        {
            "lower": lo,
            "upper": hi,
            "label": catalog.names[tl.labels[(lo, hi)]],
            "label_dims": catalog.indecs[tl.labels[(lo, hi)]].dim_vector_str(),
        }
        for lo, hi in sorted(tl.lattice.cover_edges)
    ]
    names = [f"T{e}" for e in range(tl.n)]
    exchange = lat.to_text(
        tl.lattice,
        names=names,
    )
    return {
        "format": "tors v1",
        "elements": elements,
        "covers": covers,
        "lattice_v1": exchange,
    }


def tors_dot(tl: tors.TorsLattice) -> str:
    catalog = tl.catalog
    node_names = [tl.class_name(e) for e in range(tl.n)]
    edge_labels = {
        edge: catalog.indecs[b].dim_vector_str() for edge, b in tl.labels.items()
    }
    return lat.to_dot(tl.lattice, names=node_names, edge_labels=edge_labels)


def cmd_ind(args) -> int:
    _, catalog = _load(args)
    if args.format == "text":
        lines = [
            f"{i} {catalog.names[i]} dims={m.dim_vector_str()}"
            f"{' brick' if catalog.brick_flags[i] else ''}"
            for i, m in enumerate(catalog.indecs)
        ]
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, json.dumps(catalog.dump(), indent=2) + "\n")
    return 0


def cmd_tors(args) -> int:
    _, catalog = _load(args)
    tl = tors.enumerate_torsion_classes(catalog)
    if args.format == "dot":
        _emit(args, tors_dot(tl))
    elif args.format == "text":
        names = [f"T{e}" for e in range(tl.n)]
        _emit(args, lat.to_text(tl.lattice, names=names))
    else:
        _emit(args, json.dumps(tors_dump(tl), indent=2) + "\n")
    return 0


def cmd_kappa(args) -> int:
    _, catalog = _load(args)
    tl = tors.enumerate_torsion_classes(catalog)
    try:
        brick = catalog.lookup(args.brick)
    except TorskitError as exc:
        raise UsageError(str(exc))
    if not catalog.brick_flags[brick]:
        raise UsageError(f"{args.brick} is not a brick")
    e = tl.element(tors.filt_gen(catalog, brick))
    k = lat.kappa(tl.lattice, e)
    out = {
        "brick": catalog.names[brick],
        "element": e,
        "kappa_element": k,
        "kappa_members": [catalog.names[i] for i in tors.members(tl.classes[k])],
        "perp_members": [
            catalog.names[i] for i in tors.members(tors.perp_left(catalog, brick))
        ],
    }
    _emit(args, json.dumps(out, indent=2) + "\n")
    return 0


def cmd_kappa_bar(args) -> int:
    _, catalog = _load(args)
    tl = tors.enumerate_torsion_classes(catalog)
    e = args.element
    if e < 0 or e >= tl.n:
        raise UsageError(f"element {e} out of range 0..{tl.n - 1}")
    kb = lat.kappa_bar(tl.lattice, e)
    out = {
        "element": e,
        "members": [catalog.names[i] for i in tors.members(tl.classes[e])],
        "kappa_bar_element": kb,
        "kappa_bar_members": [catalog.names[i] for i in tors.members(tl.classes[kb])],
    }
    _emit(args, json.dumps(out, indent=2) + "\n")
    return 0


def cmd_orbits(args) -> int:
    _, catalog = _load(args)
    tl = tors.enumerate_torsion_classes(catalog)
    orbits = lat.kappa_bar_orbits(tl.lattice)
    out = {
        "orbits": [
            {
                "elements": list(o.elements),
                "element_names": [tl.class_name(e) for e in o.elements],
                "joinand_counts": list(o.joinand_counts),
                "average": str(o.average),
            }
            for o in orbits
        ]
    }
    _emit(args, json.dumps(out, indent=2) + "\n")
    return 0


def cmd_wide(args) -> int:
    _, catalog = _load(args)
    tl = tors.enumerate_torsion_classes(catalog)
    seen = {}
    for e in range(tl.n):
        w = tors.alpha(catalog, tl.classes[e], tl.semibrick_of[e])
        seen.setdefault(w, e)
    out = {
        "wide_subcategories": [
            {
                "members": [catalog.names[i] for i in tors.members(w)],
                "simples": sorted(catalog.names[b] for b in tl.semibrick_of[e]),
            }
            for w, e in sorted(seen.items())
        ]
    }
    _emit(args, json.dumps(out, indent=2) + "\n")
    return 0


def cmd_epsilon(args) -> int:
    _, catalog = _load(args)
    try:
        simples = frozenset(catalog.lookup(s) for s in args.simples.split(","))
    except TorskitError as exc:
        raise UsageError(str(exc))
    w = tors.filt_closure(catalog, tors.mask_of(simples))
    image = tors.epsilon(catalog, w)
    out = {
        "wide_members": [catalog.names[i] for i in tors.members(w)],
        "epsilon_members": [catalog.names[i] for i in tors.members(image)],
    }
    _emit(args, json.dumps(out, indent=2) + "\n")
    return 0


def cmd_verify(args) -> int:
    _, catalog = _load(args)
    tl = tors.enumerate_torsion_classes(catalog)
    theorems = args.theorems.split(",") if args.theorems else None
    report = verify.verify_theorems(
        catalog, tl, theorems=theorems, fixture=os.path.basename(args.spec)
    )
    _emit(args, json.dumps(report, indent=2) + "\n")
    return 0 if verify.report_passed(report) else 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torskit",
        description="Exact torsion-class lattices for small quiver algebras",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("spec", help="algebra v1 spec file")
        p.add_argument("--format", choices=["json", "dot", "text"], default="json")
        p.add_argument("--out", default=None)
        p.add_argument("--field", type=int, default=None)
        p.add_argument("--dim-cap", default=None, help="comma-separated per-vertex cap")

    p = sub.add_parser("ind", help="enumerate the indecomposables")
    common(p)
    p.set_defaults(func=cmd_ind)

    p = sub.add_parser("tors", help="build the labeled lattice of torsion classes")
    common(p)
    p.set_defaults(func=cmd_tors)

    p = sub.add_parser("kappa", help="kappa of the torsion class of a brick")
    common(p)
    p.add_argument("--brick", required=True)
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("kappa-bar", help="kappa_bar of a lattice element")
    common(p)
    p.add_argument("--element", type=int, required=True)
    p.set_defaults(func=cmd_kappa_bar)

    p = sub.add_parser("orbits", help="kappa_bar orbits with joinand averages")
    common(p)
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("wide", help="wide subcategories reached by alpha")
    common(p)
    p.set_defaults(func=cmd_wide)

    p = sub.add_parser("epsilon", help="epsilon of the wide subcategory with given simples")
    common(p)
    p.add_argument("--simples", required=True, help="comma-separated brick names")
    p.set_defaults(func=cmd_epsilon)

    p = sub.add_parser("verify", help="machine-check the theorems on a fixture")
    common(p)
    p.add_argument("--theorems", default=None, help="comma-separated subset, e.g. A,D,E")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PARSE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BUDGET_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except TorskitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
