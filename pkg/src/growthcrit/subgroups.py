"""Membership oracles for subgroups H <= G.

An oracle answers ``x in H``.  The built-in kinds also know a canonical key
for the left coset ``xH`` (``coset_key``), which lets Schreier graphs be built
with dictionary lookups instead of pairwise membership scans.
"""
from __future__ import annotations

from typing import Callable, Sequence

from .groups import Element, Group, commutes, conjugate


class SubgroupOracle:
    def __init__(self, group: Group, kind: str, contains: Callable[[Element], bool],
                 coset_key: Callable[[Element], object] | None = None, params: dict | None = None):
        self.group = group
        self.kind = kind
        self._contains = contains
        self._coset_key = coset_key
        self.params = params or {}

    def contains(self, x: Element) -> bool:
        self.group._check(x)
        return self._contains(x)

    __contains__ = contains

    @property
    def has_coset_key(self) -> bool:
        return self._coset_key is not None

    def coset_key(self, x: Element):
        """Canonical key of the left coset ``xH``; ``None`` if unavailable."""
        if self._coset_key is None:
            return None
        return self._coset_key(x)

    def same_coset(self, x: Element, y: Element) -> bool:
        return self.contains(~x * y)

    def describe(self) -> dict:
        out = {"kind": self.kind}
        out.update({k: (str(v) if isinstance(v, Element) else v) for k, v in self.params.items()})
        return out

    def __repr__(self):
        return f"SubgroupOracle({self.kind}, {self.params})"


def centralizer(g: Element) -> SubgroupOracle:
    """C(g).  The coset xC(g) is determined by the conjugate x g x^-1."""
    G = g.group
    return SubgroupOracle(G, "centralizer", lambda x: commutes(x, g),
                          lambda x: conjugate(x, g).form, {"g": g})


def trivial(group: Group) -> SubgroupOracle:
    e = group.identity_form
    return SubgroupOracle(group, "trivial", lambda x: x.form == e, lambda x: x.form)


def whole_group(group: Group) -> SubgroupOracle:
    return SubgroupOracle(group, "whole_group", lambda x: True, lambda x: ())


def exponent_sum_kernel(group: Group, matrix: Sequence[Sequence[int]]) -> SubgroupOracle:
    """Kernel of x -> M . (exponent-sum vector of x).  The kernel is normal,
    so the image vector is a canonical coset key."""
    M = [[int(v) for v in row] for row in matrix]
    width = len(group.abelianization(group.identity))
    if any(len(row) != width for row in M):
        raise ValueError(f"matrix rows must have length {width}")

    def image(x):
        v = group.abelianization(x)
        return tuple(sum(a * b for a, b in zip(row, v)) for row in M)

    zero = (0,) * len(M)
    return SubgroupOracle(group, "exponent_sum_kernel", lambda x: image(x) == zero, image,
                          {"matrix": M})


def center(group: Group) -> SubgroupOracle:
    """Z(G), decided by commuting with every generator.  The tuple of
    conjugates x s x^-1 over generators s determines the coset xZ."""
    gens = group.generators
    return SubgroupOracle(group, "center", group.in_center,
                          lambda x: tuple(conjugate(x, s).form for s in gens))


def custom(group: Group, predicate: Callable[[Element], bool], label: str = "custom") -> SubgroupOracle:
    """Arbitrary membership predicate; cosets are resolved by membership tests."""
    return SubgroupOracle(group, label, predicate, None)


def parse_subgroup(group: Group, text: str) -> SubgroupOracle:
    """Parse ``trivial``, ``whole``, ``center``, ``centralizer:<word>`` or
    ``expsum:<row>;<row>`` (rows comma separated)."""
    kind, _, arg = text.partition(":")
    kind = kind.strip()
    if kind == "trivial":
        return trivial(group)
    if kind in ("whole", "whole_group"):
        return whole_group(group)
    if kind == "center":
        return center(group)
    if kind == "centralizer":
        return centralizer(group.parse_word(arg.replace(",", " ")))
    if kind in ("expsum", "exponent_sum_kernel"):
        rows = [[int(v) for v in r.split(",")] for r in arg.split(";") if r.strip()]
        return exponent_sum_kernel(group, rows)
    raise ValueError(f"unknown subgroup spec {text!r}")
