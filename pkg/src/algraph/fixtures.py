"""Small reference algebras shipped with the package.

S2       two-element join semilattice
M2       two-element majority (median) algebra
A2       two-element minority algebra x+y+z mod 2
P2       two-element projection algebra (admits no structure; negative control)
RPS      rock-paper-scissors groupoid on three elements
Z3A      idempotent affine reduct of Z3, x-y+z mod 3
S3chain  three-element chain semilattice

Each is parsed from its ``.alg`` file, so loading them also exercises the
text format.
"""

from __future__ import annotations

from importlib import resources

from .core import Algebra, parse_algebra

FIXTURE_NAMES = ("S2", "M2", "A2", "P2", "RPS", "Z3A", "S3chain")

_cache: dict[str, Algebra] = {}


def fixture(name: str) -> Algebra:
    """Load one of the shipped algebras by name."""
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; known: {FIXTURE_NAMES}")
    if name not in _cache:
        text = resources.files("algraph.data").joinpath(f"{name}.alg").read_text()
        _cache[name] = parse_algebra(text)
    return _cache[name]


def all_fixtures() -> dict[str, Algebra]:
    return {name: fixture(name) for name in FIXTURE_NAMES}


def S2() -> Algebra:
    return fixture("S2")


def M2() -> Algebra:
    return fixture("M2")


def A2() -> Algebra:
    return fixture("A2")


def P2() -> Algebra:
    return fixture("P2")


def RPS() -> Algebra:
    return fixture("RPS")


def Z3A() -> Algebra:
    return fixture("Z3A")


def S3chain() -> Algebra:
    return fixture("S3chain")
