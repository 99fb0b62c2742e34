"""Breadth-first enumeration of balls and growth functions of subsets."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .groups import Element, Group, conjugate, generator_elements
from .reports import VerificationReport

DEFAULT_BUDGET = 5_000_000


class BudgetExceeded(RuntimeError):
    """Raised when a ball or graph outgrows its element budget.

    ``partial`` holds the result completed up to ``completed_radius``.
    """

    def __init__(self, message: str, partial=None, completed_radius: int = -1):
        super().__init__(message)
        self.partial = partial
        self.completed_radius = completed_radius


class BallIndex:
    """Elements of B_n in BFS order with their word lengths.

    ``forms[offsets[k]:offsets[k+1]]`` is the sphere of radius k.
    """

    def __init__(self, group: Group, generators: Sequence[Element], forms: list, offsets: list[int]):
        self.group = group
        self.generators = list(generators)
        self.forms = forms
        self.offsets = offsets
        self.radius = len(offsets) - 2
        self.length = {}
        for k in range(self.radius + 1):
            for f in forms[offsets[k]:offsets[k + 1]]:
                self.length[f] = k
        self._elements = None

    @property
    def counts(self) -> list[int]:
        """Sphere sizes |S_k| for k <= radius."""
        return [self.offsets[k + 1] - self.offsets[k] for k in range(self.radius + 1)]

    def size(self, n: int | None = None) -> int:
        """|B_n| (defaults to the full radius)."""
        n = self.radius if n is None else n
        if n > self.radius:
            raise ValueError(f"ball only built to radius {self.radius}")
        return self.offsets[n + 1]

    def __len__(self):
        return len(self.forms)

    def __contains__(self, x: Element) -> bool:
        return x.form in self.length

    def length_of(self, x: Element) -> int | None:
        return self.length.get(x.form)

    @property
    def elements(self) -> list[Element]:
        if self._elements is None:
            G = self.group
            self._elements = [Element(G, f) for f in self.forms]
        return self._elements

    def sphere(self, k: int) -> list[Element]:
        return self.elements[self.offsets[k]:self.offsets[k + 1]]

    def items(self) -> Iterator[tuple[Element, int]]:
        for k in range(self.radius + 1):
            for x in self.sphere(k):
                yield x, k


def _expand(group: Group, gen_forms: list, chunk: list) -> list[list]:
    mul = group._mul
    return [[mul(s, x) for s in gen_forms] for x in chunk]


def enumerate_ball(group: Group, n: int, budget: int = DEFAULT_BUDGET,
                   generators: Sequence[Element | str] | None = None, threads: int = 1) -> BallIndex:
    """B_n by BFS over left multiplication by generators.

    The frontier may be expanded by several threads; results are merged in
    frontier order so the index is identical for every thread count.
    """
    if n < 0:
        raise ValueError("radius must be >= 0")
    if budget <= 0:
        raise ValueError("budget must be positive")
    gens = group.generators if generators is None else generator_elements(group, generators)
    gen_forms = [s.form for s in gens]
    forms = [group.identity_form]
    seen = {group.identity_form}
    offsets = [0, 1]
    frontier = forms[:]
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        for k in range(1, n + 1):
            if pool is None:
                products = _expand(group, gen_forms, frontier)
            else:
                size = max(1, math.ceil(len(frontier) / threads))
                chunks = [frontier[i:i + size] for i in range(0, len(frontier), size)]
                products = [p for part in pool.map(lambda c: _expand(group, gen_forms, c), chunks)
                            for p in part]
            new = []
            for row in products:
                for f in row:
                    if f not in seen:
                        seen.add(f)
                        new.append(f)
            if len(forms) + len(new) > budget:
                partial = BallIndex(group, gens, forms, offsets)
                raise BudgetExceeded(
                    f"ball of radius {k} exceeds budget {budget} (completed radius {k - 1})",
                    partial, k - 1)
            forms.extend(new)
            offsets.append(len(forms))
            frontier = new
    finally:
        if pool is not None:
            pool.shutdown()
    return BallIndex(group, gens, forms, offsets)


@dataclass
class GrowthSeries:
    """n -> |A cap B_n|, each value flagged exact or lower_bound."""

    values: list[int]
    exact: list[bool]
    label: str = ""
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.values) != len(self.exact):
            raise ValueError("values and exactness flags differ in length")

    def __getitem__(self, n: int) -> int:
        return self.values[n]

    def __len__(self):
        return len(self.values)

    @property
    def all_exact(self) -> bool:
        return all(self.exact)

    def exactness(self, n: int) -> str:
        return "exact" if self.exact[n] else "lower_bound"

    def to_csv(self) -> str:
        rows = ["n,count,exactness"]
        rows += [f"{n},{v},{self.exactness(n)}" for n, v in enumerate(self.values)]
        return "\n".join(rows) + "\n"


def ball_growth(ball: BallIndex) -> GrowthSeries:
    sizes = [ball.size(k) for k in range(ball.radius + 1)]
    return GrowthSeries(sizes, [True] * len(sizes), "ball")


def growth_of_subset(ball: BallIndex, predicate: Callable[[Element], bool], label: str = "") -> GrowthSeries:
    """alpha_A(n) = |A cap B_n| for every n up to the ball radius."""
    per_len = [0] * (ball.radius + 1)
    for x, k in ball.items():
        if predicate(x):
            per_len[k] += 1
    values, total = [], 0
    for c in per_len:
        total += c
        values.append(total)
    return GrowthSeries(values, [True] * len(values), label)


def word_length(group: Group, x: Element, ball: BallIndex | None = None, max_radius: int = 64,
                budget: int = DEFAULT_BUDGET) -> int:
    """|x| for the standard generators: closed form if the realization has
    one, else BFS."""
    n = group.geodesic_length(x)
    if n is not None:
        return n
    if ball is not None and ball.generators == group.generators:
        n = ball.length_of(x)
        if n is not None:
            return n
    r = 1
    while True:
        rr = min(r, max_radius)
        n = enumerate_ball(group, rr, budget).length_of(x)
        if n is not None:
            return n
        if rr == max_radius:
            break
        r *= 2
    raise BudgetExceeded(f"{x} not found within radius {max_radius}")


def conjugacy_class_growth(group: Group, g: Element, n: int, conj_budget: int | None = None,
                           ball: BallIndex | None = None, budget: int = DEFAULT_BUDGET) -> GrowthSeries:
    """alpha_{Cl(g)}(k) for k <= n.

    Exact when the realization decides conjugacy; otherwise the counts of
    {t g t^-1 : |t| <= conj_budget} cap B_k, flagged as lower bounds.
    """
    if ball is None or ball.radius < n or ball.generators != group.generators:
        ball = enumerate_ball(group, n, budget)
    if group.has_conjugacy_oracle:
        series = growth_of_subset(ball, lambda x: group.is_conjugate(g, x), f"Cl({g})")
        series.values = series.values[:n + 1]
        series.exact = series.exact[:n + 1]
        return series
    m = n if conj_budget is None else conj_budget
    tball = ball if m <= ball.radius else enumerate_ball(group, m, budget)
    found = set()
    for t in tball.elements[:tball.size(m)]:
        c = conjugate(t, g)
        if c.form in ball.length and ball.length[c.form] <= n:
            found.add(c.form)
    per_len = [0] * (n + 1)
    for f in found:
        per_len[ball.length[f]] += 1
    values, total = [], 0
    for c in per_len:
        total += c
        values.append(total)
    return GrowthSeries(values, [False] * (n + 1), f"Cl({g})",
                        [f"conjugators |t| <= {m}; values are lower bounds"])


def compare_generating_sets(group: Group, S: Sequence[Element | str], T: Sequence[Element | str],
                            n: int, budget: int = DEFAULT_BUDGET) -> VerificationReport:
    """Find C with C^-1 |g|_S <= |g|_T <= C |g|_S and check it on B_n^S cup B_n^T."""
    S = generator_elements(group, S)
    T = generator_elements(group, T)
    bS = enumerate_ball(group, n, budget, S)
    bT = enumerate_ball(group, n, budget, T)
    cross = []
    for t in T:
        cross.append(bS.length_of(t))
    for s in S:
        cross.append(bT.length_of(s))
    if any(c is None for c in cross):
        return VerificationReport("generating_sets", "not-applicable",
                                  {"radius": n, "reason": "a generator is not reached within radius n"})
    C = max(1, max(cross))
    bigS = enumerate_ball(group, C * n, budget, S)
    bigT = enumerate_ball(group, C * n, budget, T)
    points = {f for f in bS.forms} | {f for f in bT.forms}
    table, ok = [], True
    for f in sorted(points, key=lambda f: (bS.length.get(f, C * n + 1), repr(f))):
        ls = bigS.length.get(f)
        lt = bigT.length.get(f)
        good = ls is not None and lt is not None and ls <= C * lt and lt <= C * ls
        ok &= good
        table.append({"element": group.format(Element(group, f)), "len_S": ls, "len_T": lt, "ok": good})
    tight = any(row["len_T"] == C * row["len_S"] or row["len_S"] == C * row["len_T"]
                for row in table if row["len_S"])
    return VerificationReport("generating_sets", "verified" if ok else "failed",
                              {"C": C, "radius": n, "points": len(table), "tight": tight}, table)


def subgroup_conjugacy_containment(group: Group, T: Sequence[Element | str], h_word: str, n: int,
                                   conj_budget: int | None = None,
                                   budget: int = DEFAULT_BUDGET) -> VerificationReport:
    """Check B_n^T cap Cl_H(h) inside B_{Mn}^S cap Cl_G(h) for H = <T>,
    M = max |t|_S.  ``h_word`` is a G-word; it must lie in the T-ball."""
    Tel = generator_elements(group, T)
    h = group.parse_word(h_word)
    bT = enumerate_ball(group, max(n, conj_budget or n), budget, Tel)
    if h not in bT:
        return VerificationReport("subgroup_containment", "not-applicable",
                                  {"reason": "h is not in the T-ball of the chosen radius"})
    M = 0
    for t in Tel:
        M = max(M, word_length(group, t, budget=budget))
    bS = enumerate_ball(group, M * n, budget)
    m = n if conj_budget is None else conj_budget
    lhs = set()
    for t in bT.elements[:bT.size(m)]:
        c = conjugate(t, h)
        if bT.length.get(c.form, n + 1) <= n:
            lhs.add(c.form)
    ok = True
    for f in lhs:
        x = Element(group, f)
        if bS.length.get(f) is None:
            ok = False
        elif group.has_conjugacy_oracle and not group.is_conjugate(h, x):
            ok = False
    rhs_exact = group.has_conjugacy_oracle
    if rhs_exact:
        rhs = sum(1 for x in bS.elements if group.is_conjugate(h, x))
    else:
        rhs = len({conjugate(t, h).form for t in bS.elements} & set(bS.forms))
    status = "verified" if ok and len(lhs) <= rhs else "failed"
    notes = [f"left side enumerated from conjugators t in B_{m}^T (lower bound on Cl_H(h) cap B_n^T)"]
    if not rhs_exact:
        notes.append("right side is a lower bound (no conjugacy oracle)")
        if status == "verified":
            status = "consistent"
    return VerificationReport("subgroup_containment", status,
                              {"M": M, "n": n, "lhs_count": len(lhs), "rhs_count": rhs,
                               "rhs_exact": rhs_exact}, notes=notes)
