"""Standard realizations used by the demos and the test suite."""
from __future__ import annotations

from .groups import AbelianGroup, DirectProduct, FreeGroup, FreeProduct, HeisenbergGroup
from .specnorm import register_analytic_bound

FREE_PRODUCT_BOUND_NOTE = (
    "assumed, not certified: rho(n) <= (n+1)^(3/2) for the free product of F2 x Z with Z; "
    "the certified bound for the F2 x Z factor alone is sqrt(2n+1) (n+1)^(3/2)")


def free(rank: int = 2) -> FreeGroup:
    return FreeGroup(rank)


def integers(rank: int = 1) -> AbelianGroup:
    return AbelianGroup(rank)


def heisenberg() -> HeisenbergGroup:
    return HeisenbergGroup()


def free_times_z() -> DirectProduct:
    """F2 x Z with generators a, b, t."""
    return DirectProduct([FreeGroup(2), AbelianGroup(1)])


def free_product_fixture() -> FreeProduct:
    """(F2 x Z) * Z with generators a, b, t from the first factor and u from
    the second.  t is central in its factor, so C(t) is that factor."""
    G = FreeProduct([free_times_z(), AbelianGroup(1, labels=["u"])])
    register_analytic_bound(G, lambda n: (n + 1) ** 1.5, FREE_PRODUCT_BOUND_NOTE, certified=False)
    return G
