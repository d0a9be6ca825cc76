import pathlib

import pytest
from hypothesis import settings

from torskit.algebra import parse_algebra_file
from torskit.catalog import enumerate_indecomposables
from torskit.tors import enumerate_torsion_classes

settings.register_profile("ci", max_examples=40, deadline=None, derandomize=True)
settings.load_profile("ci")

FIXTURE_DIR = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

CORE_FIXTURES = ["a2", "a2-rev", "a3", "a3-rev", "a4", "d4", "app-a4rel"]
HEREDITARY_FIXTURES = ["a2", "a2-rev", "a3", "a3-rev", "a4", "d4"]

_build_cache: dict[str, tuple] = {}


def fixture_file(name: str) -> pathlib.Path:
    return FIXTURE_DIR / f"{name}.alg"


def build(name: str):
    """(algebra, catalog, tors lattice) for a fixture, cached per session."""
    if name not in _build_cache:
        algebra = parse_algebra_file(fixture_file(name))
        catalog = enumerate_indecomposables(algebra)
        tl = enumerate_torsion_classes(catalog)
        _build_cache[name] = (algebra, catalog, tl)
    return _build_cache[name]


def build_catalog(name: str):
    """(algebra, catalog) without the lattice; reuses the full build cache."""
    if name in _build_cache:
        algebra, catalog, _ = _build_cache[name]
        return algebra, catalog
    key = f"catalog:{name}"
    if key not in _build_cache:
        algebra = parse_algebra_file(fixture_file(name))
        catalog = enumerate_indecomposables(algebra)
        _build_cache[key] = (algebra, catalog)
    return _build_cache[key]


@pytest.fixture(scope="session")
def a2():
    return build("a2")


@pytest.fixture(scope="session")
def a3():
    return build("a3")


@pytest.fixture(scope="session")
def d4():
    return build("d4")


@pytest.fixture(scope="session")
def app_a4rel():
    return build("app-a4rel")
