"""Schreier graphs G/H, co-growth, and the injections Phi_n / Psi_n.

Vertices are left cosets xH; the edge labelled s sends xH to s xH.  When the
oracle provides canonical coset keys the BFS uses a dictionary; otherwise a
new coset is compared by membership tests against representatives at
distance d-1, d and d+1 only (a neighbour of a distance-d coset cannot lie
elsewhere).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .enumeration import (DEFAULT_BUDGET, BallIndex, BudgetExceeded, GrowthSeries,
                          conjugacy_class_growth, enumerate_ball, word_length)
from .groups import Element, Group, conjugate, generator_elements
from .reports import VerificationReport
from .subgroups import SubgroupOracle, center, centralizer


class SchreierGraph:
    def __init__(self, group: Group, oracle: SubgroupOracle, generators: Sequence[Element],
                 reps: list, dist: list[int], adj: list[list[int]], parent: list, radius: int):
        self.group = group
        self.oracle = oracle
        self.generators = list(generators)
        self.reps = reps          # canonical forms of coset representatives
        self.dist = dist
        self.adj = adj            # adj[v][i]: target of generator i, -1 if outside the ball
        self.parent = parent      # (vertex, generator index) the BFS reached v from
        self.radius = radius
        self.origin = 0

    def __len__(self):
        return len(self.reps)

    @property
    def num_vertices(self) -> int:
        return len(self.reps)

    @property
    def closed(self) -> bool:
        """True when every edge is resolved, i.e. the whole (finite) coset
        space has been enumerated."""
        return all(w >= 0 for row in self.adj for w in row)

    def rep(self, v: int) -> Element:
        return Element(self.group, self.reps[v])

    def layer_sizes(self) -> list[int]:
        sizes = [0] * (self.radius + 1)
        for d in self.dist:
            sizes[d] += 1
        return sizes

    def rep_word(self, v: int) -> list[str]:
        """Labels s_k ... s_1 with rep(v) = s_k ... s_1 (leftmost applied last)."""
        labels = []
        while v != self.origin:
            u, i = self.parent[v]
            labels.append(self.group.labels[i] if self.generators == self.group.generators
                          else f"g{i}")
            v = u
        return labels

    def locate(self, x: Element) -> int | None:
        """Vertex of the coset xH, if it lies in the built ball."""
        key = self.oracle.coset_key(x)
        if key is not None:
            if not hasattr(self, "_key_index"):
                self._key_index = {self.oracle.coset_key(self.rep(v)): v for v in range(len(self))}
            return self._key_index.get(key)
        for v in range(len(self)):
            if self.oracle.contains(~self.rep(v) * x):
                return v
        return None

    def dump(self) -> str:
        lines = []
        for v in range(len(self)):
            word = " ".join(self.rep_word(v)) or "e"
            lines.append(f"{v},{self.dist[v]},{word}")
        for v in range(len(self)):
            for i, w in enumerate(self.adj[v]):
                if w >= 0:
                    lines.append(f"edge,{v},{self.group.labels[i] if self.generators == self.group.generators else i},{w}")
        return "\n".join(lines) + "\n"


def build_schreier(group: Group, oracle: SubgroupOracle, radius: int, budget: int = DEFAULT_BUDGET,
                   generators: Sequence[Element | str] | None = None, use_coset_keys: bool = True,
                   threads: int = 1) -> SchreierGraph:
    """All cosets within distance ``radius`` of the trivial coset."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    gens = group.generators if generators is None else generator_elements(group, generators)
    gforms = [s.form for s in gens]
    inv_pos = [gforms.index(group._inv(f)) for f in gforms]
    mul, inv = group._mul, group._inv
    keyed = use_coset_keys and oracle.has_coset_key
    reps = [group.identity_form]
    dist = [0]
    adj = [[-1] * len(gens)]
    parent = [None]
    layers = [[0]]
    index = {oracle.coset_key(group.identity): 0} if keyed else None
    memo: dict = {}

    def member(form) -> bool:
        hit = memo.get(form)
        if hit is None:
            hit = memo[form] = oracle.contains(Element(group, form))
        return hit

    def find(xf, candidates):
        for u in candidates:
            if member(mul(inv(reps[u]), xf)):
                return u
        return -1

    pool = ThreadPoolExecutor(threads) if threads > 1 else None

    def products(frontier):
        def work(chunk):
            out = []
            for v in chunk:
                row = []
                for s in gforms:
                    xf = mul(s, reps[v])
                    row.append((xf, oracle.coset_key(Element(group, xf)) if keyed else None))
                out.append(row)
            return out
        if pool is None:
            return work(frontier)
        size = max(1, math.ceil(len(frontier) / threads))
        chunks = [frontier[i:i + size] for i in range(0, len(frontier), size)]
        return [r for part in pool.map(work, chunks) for r in part]

    try:
        for d in range(0, radius + 1):
            frontier = layers[d]
            grow = d < radius
            new: list[int] = []
            for v, row in zip(frontier, products(frontier)):
                for i, (xf, key) in enumerate(row):
                    if adj[v][i] >= 0:
                        continue
                    if keyed:
                        w = index.get(key, -1)
                    else:
                        cands = (layers[d - 1] if d > 0 else []) + layers[d] + new
                        w = find(xf, cands)
                    if w < 0:
                        if not grow:
                            continue
                        if len(reps) + 1 > budget:
                            partial = SchreierGraph(group, oracle, gens, reps, dist, adj, parent, d)
                            raise BudgetExceeded(
                                f"Schreier graph exceeds budget {budget} at distance {d + 1}",
                                partial, d)
                        w = len(reps)
                        reps.append(xf)
                        dist.append(d + 1)
                        adj.append([-1] * len(gens))
                        parent.append((v, i))
                        new.append(w)
                        if keyed:
                            index[key] = w
                    adj[v][i] = w
                    # s^-1 sends the target back
                    j = inv_pos[i]
                    if adj[w][j] < 0:
                        adj[w][j] = v
            if grow:
                layers.append(new)
    finally:
        if pool is not None:
            pool.shutdown()
    return SchreierGraph(group, oracle, gens, reps, dist, adj, parent, radius)


def cogrowth(graph: SchreierGraph) -> GrowthSeries:
    """beta_H(k) = |B_k(G/H)| for k <= radius."""
    sizes = graph.layer_sizes()
    values, total = [], 0
    for s in sizes:
        total += s
        values.append(total)
    return GrowthSeries(values, [True] * len(values), f"beta_{graph.oracle.kind}")


def cogrowth_csv(graph: SchreierGraph) -> str:
    return cogrowth(graph).to_csv()


# -- walk moves and the distance-layer quotient ----------------------------------

def word_moves(graph: SchreierGraph, labels: Sequence[str]) -> list[int]:
    """Vertex map of left multiplication by the word l_1 ... l_k (l_k acts
    first); -1 where some intermediate coset leaves the fully expanded part."""
    G = graph.group
    idx = [G.label_index[l] for l in labels]
    full = graph.radius
    out = []
    for v in range(len(graph)):
        w = v
        for i in reversed(idx):
            if w < 0 or graph.dist[w] >= full:
                w = -1
                break
            w = graph.adj[w][i]
        out.append(w)
    return out


@dataclass
class LayerChain:
    """Quotient of a walk on a Schreier graph by distance from the origin.

    ``steps[d]`` maps a distance change to its probability from any vertex at
    distance d; lumping is checked vertex by vertex on every layer where all
    moves are defined.  Layers deeper than ``verified_depth`` reuse the law of
    the last layer when the last ``periodic_run`` verified layers agree.
    """

    steps: list[dict[int, Fraction]]
    sizes: list[int]
    verified_depth: int
    periodic_run: int
    max_jump: int
    notes: list = field(default_factory=list)
    min_run: int = 3

    @property
    def extendable(self) -> bool:
        return self.periodic_run >= self.min_run and self.max_jump == 1

    def step(self, d: int) -> dict[int, Fraction]:
        if d <= self.verified_depth:
            return self.steps[d]
        if not self.extendable:
            raise ValueError(f"layer {d} beyond verified depth {self.verified_depth}")
        return self.steps[self.verified_depth]

    def size(self, d: int) -> Fraction:
        """|sphere d|, extended past the graph by flow balance
        |S_d| P(d -> d+1) = |S_{d+1}| P(d+1 -> d)."""
        if d < len(self.sizes):
            return Fraction(self.sizes[d])
        s = Fraction(self.sizes[-1])
        for k in range(len(self.sizes) - 1, d):
            back = self.step(k + 1).get(-1, Fraction(0))
            s = s * self.step(k).get(1, Fraction(0)) / back
        return s


def layer_chain(graph: SchreierGraph, support: Sequence[tuple[Sequence[str], Fraction]],
                min_run: int = 3) -> LayerChain | None:
    """Build the distance quotient, or ``None`` if the distance partition is
    not equitable for this walk on the verified layers."""
    moves = [(word_moves(graph, w), Fraction(p)) for w, p in support]
    L = max((len(w) for w, _ in support), default=1)
    depth = graph.radius - L
    if depth < 0:
        return None
    steps: list[dict[int, Fraction]] = [None] * (depth + 1)
    dist = graph.dist
    for v in range(len(graph)):
        d = dist[v]
        if d > depth:
            continue
        prof: dict[int, Fraction] = {}
        for mv, p in moves:
            w = mv[v]
            if w < 0:
                return None
            delta = dist[w] - d
            prof[delta] = prof.get(delta, Fraction(0)) + p
        if steps[d] is None:
            steps[d] = prof
        elif steps[d] != prof:
            return None
    run = 1
    while run <= depth and steps[depth - run] == steps[depth]:
        run += 1
    jump = max((abs(k) for s in steps for k in s), default=0)
    return LayerChain(steps, graph.layer_sizes(), depth, run, jump, min_run=min_run)


# -- injections of the conjugacy-growth proposition ----------------------------------

def _locate_by_scan(graph: SchreierGraph, x: Element, cache: dict) -> int:
    """Coset of x by membership scans (never by coset keys)."""
    G = graph.group
    for v in range(len(graph)):
        f = G._mul(G._inv(graph.reps[v]), x.form)
        hit = cache.get(f)
        if hit is None:
            hit = cache[f] = graph.oracle.contains(Element(G, f))
        if hit:
            return v
    return -1


def _class_count(group: Group, s: Element, radius: int, ball: BallIndex) -> tuple[int, bool]:
    series = conjugacy_class_growth(group, s, radius, ball=ball)
    return series.values[radius], series.all_exact


def verify_phi_injection(group: Group, h: Element, n: int, budget: int = DEFAULT_BUDGET) -> VerificationReport:
    """Check that gC(h) -> g h g^-1 is a well-defined injection of the
    n-ball of G/C(h) into Cl(h) cap B_{2n+|h|}.

    With left cosets the conjugate by the representative is the invariant
    (right-coset conventions write g^-1 h g).  The target radius is 2n+|h|,
    which equals 2n+1 for generators.
    """
    H = centralizer(h)
    graph = build_schreier(group, H, n, budget, use_coset_keys=False)
    hl = word_length(group, h, budget=budget)
    R = 2 * n + hl
    ball = enumerate_ball(group, R, budget)
    images: dict = {}
    well_defined = True
    in_target = True
    cache: dict = {}
    for v in range(len(graph)):
        img = conjugate(graph.rep(v), h)
        images.setdefault(img.form, []).append(v)
        if ball.length.get(img.form, R + 1) > R:
            in_target = False
    for x in ball.elements[:ball.size(n)]:
        v = _locate_by_scan(graph, x, cache)
        if v < 0 or conjugate(x, h) != conjugate(graph.rep(v), h):
            well_defined = False
    injective = all(len(vs) == 1 for vs in images.values())
    count, exact = _class_count(group, h, R, ball)
    bound = len(graph) <= count
    ok = well_defined and injective and in_target and bound
    status = "failed" if not ok else ("verified" if exact else "consistent")
    return VerificationReport(
        "phi_injection", status,
        {"h": str(h), "n": n, "target_radius": R, "cosets": len(graph), "class_count": count,
         "class_count_exact": exact, "well_defined": well_defined, "injective": injective,
         "images_in_target": in_target, "slack": count - len(graph)})


def verify_psi_injection(group: Group, n: int, budget: int = DEFAULT_BUDGET) -> VerificationReport:
    """Check that gZ -> (g s g^-1)_s is a well-defined injection of the
    n-ball of G/Z(G) into the product of Cl(s) cap B_{2n+1}."""
    if not group.known_center:
        return VerificationReport("psi_injection", "not-applicable",
                                  {"reason": f"{group.name} has no known-center capability"})
    Z = center(group)
    graph = build_schreier(group, Z, n, budget, use_coset_keys=False)
    R = 2 * n + 1
    ball = enumerate_ball(group, R, budget)
    gens = group.generators
    seen: dict = {}
    in_target = True
    for v in range(len(graph)):
        img = tuple(conjugate(graph.rep(v), s).form for s in gens)
        seen.setdefault(img, []).append(v)
        if any(ball.length.get(f, R + 1) > R for f in img):
            in_target = False
    cache: dict = {}
    well_defined = True
    for x in ball.elements[:ball.size(n)]:
        v = _locate_by_scan(graph, x, cache)
        if v < 0 or any(conjugate(x, s) != conjugate(graph.rep(v), s) for s in gens):
            well_defined = False
    injective = all(len(vs) == 1 for vs in seen.values())
    product, exact = 1, True
    counts = {}
    for lab, s in zip(group.labels, gens):
        c, ex = _class_count(group, s, R, ball)
        counts[lab] = c
        product *= c
        exact &= ex
    ok = well_defined and injective and in_target and len(graph) <= product
    status = "failed" if not ok else ("verified" if exact else "consistent")
    notes = [] if exact else ["class counts are lower bounds (no conjugacy oracle)"]
    return VerificationReport(
        "psi_injection", status,
        {"n": n, "cosets": len(graph), "class_counts": counts, "product": product,
         "exact": exact, "well_defined": well_defined, "injective": injective,
         "images_in_target": in_target}, notes=notes)
