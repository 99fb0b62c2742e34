"""Group-algebra arithmetic and two-sided bounds on operator norms of the
left-regular representation, and on the ball profile rho(n)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .enumeration import DEFAULT_BUDGET, BallIndex, BudgetExceeded, enumerate_ball
from .groups import Element, Group
from .schreier import build_schreier, layer_chain
from .subgroups import trivial

DEFAULT_SUPPORT_CAP = 10_000_000
DEFAULT_MOMENT_K = 6
NUMERIC_MARGIN = 1e-6
COMPRESSION_BUDGET = 200_000


class SupportCapExceeded(RuntimeError):
    pass


class GroupAlgebraElement:
    """Finitely supported f: G -> Q (or floats), stored as form -> coefficient."""

    def __init__(self, group: Group, coeffs: dict | None = None, cap: int = DEFAULT_SUPPORT_CAP):
        self.group = group
        self.cap = cap
        self.coeffs = {f: c for f, c in (coeffs or {}).items() if c != 0}
        if len(self.coeffs) > cap:
            raise SupportCapExceeded(f"support {len(self.coeffs)} exceeds cap {cap}")

    @classmethod
    def delta(cls, g: Element, coef=1) -> "GroupAlgebraElement":
        return cls(g.group, {g.form: Fraction(coef)})

    @classmethod
    def from_elements(cls, group: Group, items: Iterable[tuple[Element, object]]) -> "GroupAlgebraElement":
        coeffs: dict = {}
        for x, c in items:
            group._check(x)
            coeffs[x.form] = coeffs.get(x.form, 0) + c
        return cls(group, coeffs)

    @classmethod
    def indicator(cls, group: Group, elements: Iterable[Element]) -> "GroupAlgebraElement":
        return cls.from_elements(group, ((x, Fraction(1)) for x in elements))

    def __getitem__(self, x: Element):
        return self.coeffs.get(x.form, 0)

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, GroupAlgebraElement) and self.group is other.group \
            and self.coeffs == other.coeffs

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        self._same(other)
        out = dict(self.coeffs)
        for f, c in other.coeffs.items():
            out[f] = out.get(f, 0) + c
        return GroupAlgebraElement(self.group, out, self.cap)

    def scale(self, c) -> "GroupAlgebraElement":
        return GroupAlgebraElement(self.group, {f: c * v for f, v in self.coeffs.items()}, self.cap)

    def _same(self, other):
        if other.group is not self.group:
            raise ValueError("group algebra elements over different realizations")

    def items(self) -> Iterable[tuple[Element, object]]:
        G = self.group
        return ((Element(G, f), c) for f, c in self.coeffs.items())

    def convolve(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        """(f * g)(x) = sum_t f(t) g(t^-1 x)."""
        self._same(other)
        mul = self.group._mul
        out: dict = {}
        for t, a in self.coeffs.items():
            for u, b in other.coeffs.items():
                x = mul(t, u)
                out[x] = out.get(x, 0) + a * b
            if len(out) > self.cap:
                raise SupportCapExceeded(f"convolution support exceeds cap {self.cap}")
        return GroupAlgebraElement(self.group, out, self.cap)

    __mul__ = convolve

    def adjoint(self) -> "GroupAlgebraElement":
        """f*(t) = conj(f(t^-1)); coefficients are real."""
        inv = self.group._inv
        return GroupAlgebraElement(self.group, {inv(f): c for f, c in self.coeffs.items()}, self.cap)

    def l1norm(self):
        return sum(abs(c) for c in self.coeffs.values())

    def l2norm_sq(self):
        return sum(c * c for c in self.coeffs.values())

    def l2norm(self) -> float:
        return math.sqrt(self.l2norm_sq())

    def inner(self, other: "GroupAlgebraElement"):
        return sum(c * other.coeffs.get(f, 0) for f, c in self.coeffs.items())

    def trace(self):
        """Coefficient at the identity."""
        return self.coeffs.get(self.group.identity_form, 0)

    def support_radius(self, ball: BallIndex | None = None) -> int | None:
        lengths = []
        for x, _ in self.items():
            n = self.group.geodesic_length(x)
            if n is None and ball is not None:
                n = ball.length_of(x)
            if n is None:
                return None
            lengths.append(n)
        return max(lengths, default=0)

    def __repr__(self):
        return f"GroupAlgebraElement({self.group.name}, support={len(self)})"


def convolve(f: GroupAlgebraElement, g: GroupAlgebraElement) -> GroupAlgebraElement:
    return f.convolve(g)


def adjoint(f: GroupAlgebraElement) -> GroupAlgebraElement:
    return f.adjoint()


# -- lower bounds on ||lambda(f)|| ---------------------------------------------------

@dataclass
class NormBound:
    value: float
    method: str
    params: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    certified: bool = True


def _root_down(q, k: int) -> float:
    """Lower bound on q^(1/k) for a positive rational q."""
    q = Fraction(q)
    val = math.exp((math.log(q.numerator) - math.log(q.denominator)) / k)
    return val * (1 - 1e-12)


def moment_sequence(f: GroupAlgebraElement, k: int) -> tuple[list, list]:
    """Moments m_j = tau((f* f)^j) for j = 1..k as far as the support cap
    allows, plus notes.  Uses m_2i = ||h^i||^2 and m_2i+1 = <h^i+1, h^i>
    for h = f* f, which is self-adjoint."""
    h = f.adjoint().convolve(f)
    powers = [GroupAlgebraElement.delta(f.group.identity), h]
    notes = []
    moments = []
    for j in range(1, k + 1):
        i = (j + 1) // 2
        try:
            while len(powers) <= i:
                powers.append(powers[-1].convolve(h))
        except SupportCapExceeded as exc:
            notes.append(f"truncated at moment {j - 1}: {exc}")
            break
        if j % 2 == 0:
            moments.append(powers[i].l2norm_sq())
        else:
            moments.append(powers[i].inner(powers[i - 1]))
    return moments, notes


def _moment_bound(f: GroupAlgebraElement, k: int) -> NormBound:
    moments, notes = moment_sequence(f, k)
    if not moments:
        return NormBound(0.0, "moment", {"k": 0}, notes)
    best = max(_root_down(m, 2 * (j + 1)) for j, m in enumerate(moments))
    return NormBound(best, "moment", {"k": len(moments)}, notes)


def _ball_matrix(f: GroupAlgebraElement, ball: BallIndex, R: int) -> sp.csr_matrix:
    """lambda(f) cut to B_R: A[x, y] = f(x y^-1)."""
    G = f.group
    mul = G._mul
    n = ball.size(R)
    index = {}
    for i, form in enumerate(ball.forms[:n]):
        index[form] = i
    rows, cols, vals = [], [], []
    for t, c in f.coeffs.items():
        c = float(c)
        for j, y in enumerate(ball.forms[:n]):
            i = index.get(mul(t, y))
            if i is not None:
                rows.append(i)
                cols.append(j)
                vals.append(c)
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def _power_norm(A: sp.csr_matrix, start: np.ndarray | None, seed: int, restarts: int = 3,
                iters: int = 200, tol: float = 1e-9) -> tuple[float, np.ndarray]:
    """max ||Av||/||v|| over power-iteration vectors of A^T A."""
    n = A.shape[0]
    rng = np.random.default_rng(seed)
    starts = [] if start is None else [start]
    starts += [rng.standard_normal(n) for _ in range(restarts)]
    best, best_v = 0.0, None
    AT = A.T.tocsr()
    for v in starts:
        v = v / (np.linalg.norm(v) or 1.0)
        prev = 0.0
        for _ in range(iters):
            Av = A @ v
            est = float(np.linalg.norm(Av))
            w = AT @ Av
            nw = np.linalg.norm(w)
            if nw == 0:
                break
            v = w / nw
            if abs(est - prev) <= tol * max(est, 1e-300):
                break
            prev = est
        est = float(np.linalg.norm(A @ v))
        if est > best:
            best, best_v = est, v
    return best, best_v


def _radial_chain(f: GroupAlgebraElement, radius: int, budget: int):
    """Sphere laws of the walk f/||f||_1 on the Cayley graph of the given
    radius, for f >= 0 symmetric and supported on generators; else None."""
    from .walk import WalkSpec

    G = f.group
    gens = {s.form: lab for s, lab in zip(G.generators, G.labels)}
    if any(form not in gens or c < 0 for form, c in f.coeffs.items()):
        return None
    if any(f.coeffs.get(G._inv(form), 0) != c for form, c in f.coeffs.items()):
        return None
    total = Fraction(f.l1norm())
    mu = WalkSpec.build(G, [((gens[form],), Fraction(c) / total) for form, c in f.coeffs.items()])
    try:
        graph = build_schreier(G, trivial(G), radius, budget)
    except BudgetExceeded:
        return None
    chain = layer_chain(graph, mu.support)
    return None if chain is None else (chain, total)


def _layered_bound(chain, total: Fraction, R: int) -> NormBound | None:
    """Top eigenvalue of lambda(f) compressed to radial vectors on B_R.  Laws
    past the verified depth extend the settled law and are flagged."""
    notes = []
    if R > chain.verified_depth:
        if not chain.extendable:
            return None
        notes.append(f"sphere laws beyond depth {chain.verified_depth} extend the settled law")
    T = np.zeros((R + 1, R + 1))
    for d in range(R + 1):
        law = chain.step(d)
        T[d, d] = float(law.get(0, 0))
        if d < R:
            up = law.get(1, 0) * chain.step(d + 1).get(-1, 0)
            T[d, d + 1] = T[d + 1, d] = math.sqrt(float(up))
    top = float(np.linalg.eigvalsh(T)[-1]) * float(total)
    return NormBound(top * (1 - NUMERIC_MARGIN), "compression", {"R": R, "route": "layered"},
                     notes, certified=R <= chain.verified_depth)


def compression_bounds(f: GroupAlgebraElement, radii: Sequence[int], ball: BallIndex | None = None,
                       budget: int = COMPRESSION_BUDGET, seed: int = 0) -> list[NormBound]:
    """Compression lower bounds for increasing radii, warm-started, with the
    running maximum taken (the cut to B_R is a corner of the cut to B_R').

    Radii whose ball exceeds ``budget`` fall back to the radial route when f
    is a nonnegative symmetric weighting of generators.
    """
    radii = sorted(radii)
    G = f.group
    if ball is None or ball.radius < radii[-1]:
        try:
            ball = enumerate_ball(G, radii[-1], budget)
        except BudgetExceeded as exc:
            ball = exc.partial
    out, prev_v, best = [], None, 0.0
    radial = None
    for R in radii:
        if R > ball.radius:
            if radial is None:
                radial = _radial_chain(f, ball.radius, budget) or False
            nb = _layered_bound(*radial, R) if radial else None
            if nb is None:
                raise BudgetExceeded(f"ball B_{R} exceeds budget and no layered route applies",
                                     out, ball.radius)
            best = max(best, nb.value)
            nb.value = best
            out.append(nb)
            continue
        A = _ball_matrix(f, ball, R)
        start = None
        if prev_v is not None:
            start = np.zeros(A.shape[0])
            start[:len(prev_v)] = prev_v
        est, prev_v = _power_norm(A, start, seed + R)
        best = max(best, est * (1 - NUMERIC_MARGIN))
        out.append(NormBound(best, "compression", {"R": R, "route": "explicit", "size": A.shape[0]},
                             [f"power iteration estimate minus {NUMERIC_MARGIN:g} relative margin"]))
    return out


def opnorm_lower(f: GroupAlgebraElement, method: str = "moment", k: int = DEFAULT_MOMENT_K,
                 R: int | None = None, ball: BallIndex | None = None,
                 budget: int = COMPRESSION_BUDGET, seed: int = 0) -> NormBound:
    """Certified lower bound on ||lambda(f)||.

    ``moment``: max_j m_j^(1/2j) with m_j = tau((f* f)^j), exact rationals.
    ``compression``: top singular value of lambda(f) cut to B_R.
    """
    if not f.coeffs:
        return NormBound(0.0, method)
    if method == "moment":
        return _moment_bound(f, k)
    if method == "compression":
        if R is None:
            raise ValueError("compression needs a radius R")
        return compression_bounds(f, [R], ball, budget, seed)[-1]
    raise ValueError(f"unknown method {method!r}")


# -- analytic upper bounds -----------------------------------------------------------

@dataclass
class AnalyticBound:
    bound: Callable[[int], float]
    note: str
    certified: bool = True


_REGISTRY: dict[str, AnalyticBound] = {}


def register_analytic_bound(kind: str | Group, bound: Callable[[int], float], note: str,
                            certified: bool = True) -> None:
    """Register n -> upper bound on rho(n) for a realization kind, or for one
    group instance when a Group is passed."""
    ab = AnalyticBound(bound, note, certified)
    if isinstance(kind, Group):
        kind.rho_bound = ab
    else:
        _REGISTRY[kind] = ab


def analytic_bound(group: Group) -> AnalyticBound | None:
    if group.rho_bound is not None:
        return group.rho_bound
    return _REGISTRY.get(group.describe()["kind"])


register_analytic_bound(
    "free", lambda n: (n + 1) ** 1.5,
    "free basis: ||lambda(f)|| <= (k+1)||f||_2 on spheres S_k (Haagerup), summed over "
    "k <= n with Cauchy-Schwarz")


def word_count_bound(group: Group, n: int) -> int:
    """|B_n| <= 1 + sum_k |S|(|S|-1)^(k-1) for a symmetric generating set S."""
    s = len(group.generators)
    return 1 + sum(s * (s - 1) ** (k - 1) for k in range(1, n + 1))


@dataclass
class UpperBound:
    value: float
    source: str
    certified: bool
    note: str = ""


def rho_upper(group: Group, n: int, ball: BallIndex | None = None) -> UpperBound:
    """min(sqrt|B_n|, registered bound).  Without a ball the word count is used."""
    if ball is not None and ball.radius >= n and ball.generators == group.generators:
        best = UpperBound(math.sqrt(ball.size(n)), "sqrt_ball", True)
    else:
        best = UpperBound(math.sqrt(word_count_bound(group, n)), "sqrt_word_count", True)
    ab = analytic_bound(group)
    if ab is not None:
        v = ab.bound(n)
        if v < best.value:
            best = UpperBound(v, "analytic" if ab.certified else "assumed", ab.certified, ab.note)
    return best


# -- rho profile ---------------------------------------------------------------------

@dataclass
class RhoProfile:
    group: dict
    lower: list[float]
    upper: list[float]
    witness: list[str]
    upper_source: list[str]
    certified_upper: list[bool]
    notes: list = field(default_factory=list)

    def to_csv(self) -> str:
        rows = ["n,rho_lower,rho_upper,lower_witness,upper_source"]
        for n, (lo, up, w, s) in enumerate(zip(self.lower, self.upper, self.witness, self.upper_source)):
            rows.append(f"{n},{lo!r},{up!r},{w},{s}")
        return "\n".join(rows) + "\n"


def _family(group: Group, ball: BallIndex, n: int, families: Sequence, rng_seed: int):
    els = ball.elements
    if "ball" in families:
        yield "ball", GroupAlgebraElement.indicator(group, els[:ball.size(n)])
    if "sphere" in families and n > 0:
        yield "sphere", GroupAlgebraElement.indicator(group, ball.sphere(n))
    for fam in families:
        if isinstance(fam, tuple) and fam[0] == "random_signs":
            _, count, seed = fam
            rng = np.random.default_rng([seed, n])
            for i in range(count):
                signs = rng.choice([-1, 1], size=ball.size(n))
                yield f"random_signs[{i}]", GroupAlgebraElement.from_elements(
                    group, zip(els[:ball.size(n)], (Fraction(int(s)) for s in signs)))


def rho_profile(group: Group, n_max: int, families: Sequence = ("ball", "sphere"),
                method: str = "compression", k: int = DEFAULT_MOMENT_K, extra_radius: int = 64,
                budget: int = DEFAULT_BUDGET, compression_budget: int = COMPRESSION_BUDGET,
                work_budget: int = 2_000_000, seed: int = 0) -> RhoProfile:
    """Lower and upper bounds on rho(n) = max ||lambda(f)||/||f||_2 over
    supp f in B_n.

    Lower bounds come from the chosen families.  Compression for f uses the
    largest R <= n + extra_radius with |B_R| <= compression_budget and
    |B_R| * |supp f| <= work_budget.
    """
    ball = enumerate_ball(group, n_max, budget)
    try:
        big = enumerate_ball(group, n_max + extra_radius, compression_budget)
    except BudgetExceeded as exc:
        big = exc.partial
    if big.radius < n_max:
        big = ball
    lower, upper, wit, src, cert = [], [], [], [], []
    best, best_w = 1.0, "delta_e"
    notes = []
    for n in range(n_max + 1):
        for name, f in _family(group, ball, n, families, seed):
            if method == "moment":
                nb = _moment_bound(f, k)
            else:
                R = n
                while R < big.radius and big.size(R + 1) * len(f) <= work_budget:
                    R += 1
                nb = compression_bounds(f, [R], big, compression_budget, seed)[-1]
            ratio = nb.value / f.l2norm()
            if ratio > best:
                best, best_w = ratio, f"{name}(n={n})"
        ub = rho_upper(group, n, ball)
        if not ub.certified:
            notes.append(f"n={n}: upper bound is assumed ({ub.note})")
        lower.append(best)
        upper.append(ub.value)
        wit.append(best_w)
        src.append(ub.source)
        cert.append(ub.certified)
    return RhoProfile(group.describe(), lower, upper, wit, src, cert, notes)
