"""Random walks on Schreier graphs: exact pushforward distributions, return
probabilities, Monte-Carlo estimates and spectral-radius fits."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import lsq_linear

from .groups import Element, Group
from .enumeration import BudgetExceeded
from .schreier import LayerChain, SchreierGraph, build_schreier, layer_chain, word_moves
from .subgroups import SubgroupOracle

MC_BLOCK = 4096
RNG_ALGORITHM = "numpy.Philox (SeedSequence spawn_key per block)"
DEFAULT_VERTEX_CAP = 5_000_000


class RadiusError(ValueError):
    """The graph is too small for the requested number of steps."""

    def __init__(self, message: str, required_radius: int):
        super().__init__(message)
        self.required_radius = required_radius


class ExactModeCapExceeded(MemoryError):
    """Exact propagation would exceed the memory cap; use Monte-Carlo mode."""


@dataclass(frozen=True)
class WalkSpec:
    """A finitely supported probability measure on words in the generators."""

    support: tuple[tuple[tuple[str, ...], Fraction], ...]
    symmetric: bool

    @property
    def max_length(self) -> int:
        return max((len(w) for w, _ in self.support), default=0)

    @property
    def denominator(self) -> int:
        return math.lcm(*(p.denominator for _, p in self.support))

    @classmethod
    def uniform(cls, group: Group) -> "WalkSpec":
        k = len(group.labels)
        return cls.build(group, [((lab,), Fraction(1, k)) for lab in group.labels])

    @classmethod
    def from_weights(cls, group: Group, items: Sequence[tuple[str, object]]) -> "WalkSpec":
        """``items`` pairs a word such as ``"a b^-1"`` with a weight (any
        value ``Fraction`` accepts, e.g. ``"1/4"``)."""
        return cls.build(group, [(tuple(group.word_labels(w)), Fraction(p)) for w, p in items])

    @classmethod
    def parse(cls, group: Group, text: str) -> "WalkSpec":
        """``uniform`` or ``word:weight,word:weight,...``."""
        if text.strip() in ("", "uniform"):
            return cls.uniform(group)
        items = []
        for part in text.split(","):
            word, sep, weight = part.rpartition(":")
            if not sep:
                raise ValueError(f"expected word:weight, got {part!r}")
            items.append((word.strip(), weight.strip()))
        return cls.from_weights(group, items)

    @classmethod
    def build(cls, group: Group, support: Sequence[tuple[Sequence[str], Fraction]]) -> "WalkSpec":
        supp = tuple((tuple(w), Fraction(p)) for w, p in support)
        if not supp:
            raise ValueError("empty support")
        if any(p <= 0 for _, p in supp):
            raise ValueError("weights must be positive")
        if sum(p for _, p in supp) != 1:
            raise ValueError("weights must sum to 1")
        mass: dict = {}
        for w, p in supp:
            f = group.parse_word(" ".join(w)).form
            mass[f] = mass.get(f, Fraction(0)) + p
        symmetric = all(mass.get(group._inv(f), 0) == p for f, p in mass.items())
        return cls(supp, symmetric)

    def elements(self, group: Group) -> list[tuple[Element, Fraction]]:
        return [(group.parse_word(" ".join(w)), p) for w, p in self.support]

    def describe(self) -> list:
        return [[" ".join(w) or "e", f"{p.numerator}/{p.denominator}"] for w, p in self.support]


@dataclass
class ReturnProfile:
    """kappa_n for n <= N.  Exact mode holds Fractions; MC mode holds float
    estimates with standard errors."""

    values: list
    mode: str
    certified_upto: int
    method: str = ""
    descriptor: dict = field(default_factory=dict)
    stderr: list | None = None
    samples: int | None = None
    seed: int | None = None
    algorithm: str | None = None
    notes: list = field(default_factory=list)

    def __getitem__(self, n: int):
        return self.values[n]

    def __len__(self):
        return len(self.values)

    @property
    def horizon(self) -> int:
        return len(self.values) - 1

    def to_csv(self) -> str:
        if self.mode == "exact":
            rows = ["n,kappa_exact_num,kappa_exact_den"]
            rows += [f"{n},{v.numerator},{v.denominator}" for n, v in enumerate(self.values)]
        else:
            rows = ["n,kappa_mc,stderr,samples,seed"]
            rows += [f"{n},{v!r},{e!r},{self.samples},{self.seed}"
                     for n, (v, e) in enumerate(zip(self.values, self.stderr))]
        return "\n".join(rows) + "\n"


def _descriptor(graph: SchreierGraph) -> dict:
    return {"group": graph.group.describe(), "subgroup": graph.oracle.describe(),
            "radius": graph.radius, "vertices": len(graph)}


def _move_arrays(graph: SchreierGraph, mu: WalkSpec) -> tuple[list[tuple[np.ndarray, int]], int]:
    den = mu.denominator
    out = []
    for w, p in mu.support:
        out.append((np.asarray(word_moves(graph, w), dtype=np.int64), int(p * den)))
    return out, den


def _propagate(graph: SchreierGraph, mu: WalkSpec, n: int, cap: int):
    """Yield (t, counts) for t = 0..n where counts[v] * den^-t is the mass at
    v; mass that leaves the graph is dropped."""
    if len(graph) > cap:
        raise ExactModeCapExceeded(
            f"graph has {len(graph)} vertices, above the exact-mode cap {cap}; use Monte-Carlo mode")
    moves, den = _move_arrays(graph, mu)
    cur = np.zeros(len(graph), dtype=object)
    cur[graph.origin] = 1
    yield 0, cur, den
    for t in range(1, n + 1):
        nxt = np.zeros(len(graph), dtype=object)
        live = np.nonzero(cur)[0]
        for mv, w in moves:
            tgt = mv[live]
            ok = tgt >= 0
            np.add.at(nxt, tgt[ok], cur[live[ok]] * w)
        cur = nxt
        yield t, cur, den


def exact_distribution(graph: SchreierGraph, mu: WalkSpec, n: int,
                       cap: int = DEFAULT_VERTEX_CAP) -> dict[int, Fraction]:
    """Law of the walk's vertex after n steps from the origin, exactly."""
    need = n * mu.max_length
    if graph.radius < need and not graph.closed:
        raise RadiusError(f"{n} steps need a graph of radius >= {need} (have {graph.radius})", need)
    for t, cur, den in _propagate(graph, mu, n, cap):
        if t == n:
            scale = den ** n
            return {int(v): Fraction(int(cur[v]), scale) for v in np.nonzero(cur)[0]}
    raise AssertionError("unreachable")


def explicit_horizon(graph: SchreierGraph, mu: WalkSpec) -> int:
    """Largest n for which kappa_n from truncated propagation is exact.

    Mass leaves the graph only after reaching distance >= radius - L + 1,
    which takes at least radius/L steps, and needs as long to come back.
    A closed (finite, fully enumerated) graph is exact for every n.
    """
    if graph.closed:
        return 2 ** 62
    L = max(1, mu.max_length)
    return max(0, (2 * graph.radius - L) // L)


def chain_horizon(chain: LayerChain) -> int:
    """Largest n for which kappa_n uses only verified layer laws."""
    J = max(1, chain.max_jump)
    return 2 * (chain.verified_depth // J) + 1


def _kappa_explicit(graph: SchreierGraph, mu: WalkSpec, N: int, cap: int) -> list[Fraction]:
    out = []
    for t, cur, den in _propagate(graph, mu, N, cap):
        out.append(Fraction(int(cur[graph.origin]), den ** t))
    return out


def _kappa_layered(chain: LayerChain, mu: WalkSpec, N: int) -> list[Fraction]:
    den = mu.denominator
    laws = []
    depth = N * max(1, chain.max_jump) + 1
    for d in range(depth + 1):
        try:
            laws.append([(k, int(p * den)) for k, p in chain.step(d).items()])
        except ValueError:
            break
    mass = [1]
    out = [Fraction(1)]
    for t in range(1, N + 1):
        nxt = [0] * (len(mass) + chain.max_jump + 1)
        for d, m in enumerate(mass):
            if not m:
                continue
            if d >= len(laws):
                raise ValueError(f"layer {d} has no verified law")
            for k, w in laws[d]:
                nxt[d + k] += m * w
        while len(nxt) > 1 and nxt[-1] == 0:
            nxt.pop()
        mass = nxt
        out.append(Fraction(mass[0], den ** t))
    return out


def return_profile(graph: SchreierGraph, mu: WalkSpec, N: int, method: str = "auto",
                   cap: int = DEFAULT_VERTEX_CAP) -> ReturnProfile:
    """kappa_n = P(walk is back at the origin coset after n steps), n <= N.

    ``explicit`` propagates on the graph.  ``layered`` lumps vertices by
    distance when that partition is equitable for the walk; past the
    verified layers it reuses the last law if the laws have settled, and
    values beyond ``certified_upto`` are flagged as extrapolated.
    """
    desc = _descriptor(graph)
    L = max(1, mu.max_length)
    need = -(-(N * L + L) // 2)
    if method in ("auto", "explicit") and N <= explicit_horizon(graph, mu):
        vals = _kappa_explicit(graph, mu, N, cap)
        return ReturnProfile(vals, "exact", N, "explicit", desc)
    if method == "explicit":
        raise RadiusError(f"kappa up to n={N} needs a graph of radius >= {need} (have {graph.radius})", need)
    if method not in ("auto", "layered"):
        raise ValueError(f"unknown method {method!r}")
    chain = layer_chain(graph, mu.support)
    if chain is None:
        raise RadiusError(f"distance layers are not equitable for this walk; kappa up to n={N} "
                          f"needs a graph of radius >= {need} (have {graph.radius})", need)
    cert = chain_horizon(chain)
    if N > cert and not chain.extendable:
        raise RadiusError(f"layer laws not settled; kappa up to n={N} needs a graph of radius "
                          f">= {need} (have {graph.radius})", need)
    vals = _kappa_layered(chain, mu, N)
    notes = []
    if N > cert:
        notes.append(f"values for n > {cert} extend the last verified layer law "
                     f"(settled over {chain.periodic_run} layers)")
    return ReturnProfile(vals, "exact", min(N, cert), "layered", desc, notes=notes)


def adaptive_return_profile(group: Group, oracle: SubgroupOracle, mu: WalkSpec, N: int,
                            budget: int = 200_000, threads: int = 1) -> ReturnProfile:
    """Exact kappa_n for n <= N on the smallest sufficient Schreier graph, or
    on the largest one within ``budget`` through the layered route.

    Raises RadiusError when neither route reaches N.
    """
    L = max(1, mu.max_length)
    need = -(-(N * L + L) // 2)
    try:
        graph = build_schreier(group, oracle, need, budget, threads=threads)
        return return_profile(graph, mu, N)
    except BudgetExceeded:
        pass
    graph = None
    for R in range(1, need + 1):
        try:
            graph = build_schreier(group, oracle, R, budget, threads=threads)
        except BudgetExceeded:
            break
    if graph is None:
        raise RadiusError(f"no Schreier graph fits the budget {budget}", need)
    return return_profile(graph, mu, N, "layered")


def peak_probabilities(graph: SchreierGraph, mu: WalkSpec, N: int,
                       cap: int = DEFAULT_VERTEX_CAP) -> list[Fraction]:
    """max over vertices of the n-step law, for n <= N (explicit only)."""
    need = N * mu.max_length
    if graph.radius < need and not graph.closed:
        raise RadiusError(f"{N} steps need a graph of radius >= {need} (have {graph.radius})", need)
    out = []
    for t, cur, den in _propagate(graph, mu, N, cap):
        out.append(Fraction(int(max(cur)), den ** t))
    return out


# -- Monte Carlo ---------------------------------------------------------------------

@dataclass
class MCEstimate:
    estimate: float
    stderr: float
    samples: int
    seed: int
    algorithm: str = RNG_ALGORITHM


def _block_hits(group: Group, oracle: SubgroupOracle, forms: list, probs: np.ndarray,
                N: int, seed: int, block: int, size: int) -> list[int]:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))
    picks = rng.choice(len(forms), size=(size, N), p=probs)
    mul = group._mul
    hits = [0] * (N + 1)
    hits[0] = size
    for row in picks:
        x = group.identity_form
        for t, i in enumerate(row, 1):
            x = mul(forms[i], x)
            if oracle.contains(Element(group, x)):
                hits[t] += 1
    return hits


def mc_return_profile(group: Group, oracle: SubgroupOracle, mu: WalkSpec, N: int, samples: int,
                      seed: int, threads: int = 1) -> ReturnProfile:
    """Monte-Carlo kappa_n for all n <= N from one set of sampled paths.

    Samples come in fixed blocks of MC_BLOCK, each with its own derived
    stream, so the output does not depend on the thread count.
    """
    if samples <= 0:
        raise ValueError("samples must be positive")
    forms = [x.form for x, _ in mu.elements(group)]
    probs = np.array([float(p) for _, p in mu.support])
    probs /= probs.sum()
    sizes = [min(MC_BLOCK, samples - b) for b in range(0, samples, MC_BLOCK)]
    jobs = [(b, s) for b, s in enumerate(sizes)]

    def run(job):
        return _block_hits(group, oracle, forms, probs, N, seed, *job)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(run, jobs))
    else:
        parts = [run(j) for j in jobs]
    hits = [sum(p[t] for p in parts) for t in range(N + 1)]
    est = [h / samples for h in hits]
    err = [math.sqrt(p * (1 - p) / samples) for p in est]
    desc = {"group": group.describe(), "subgroup": oracle.describe()}
    return ReturnProfile(est, "mc", N, "mc", desc, err, samples, seed, RNG_ALGORITHM)


def mc_return(group: Group, oracle: SubgroupOracle, mu: WalkSpec, n: int, samples: int,
              seed: int, threads: int = 1) -> MCEstimate:
    prof = mc_return_profile(group, oracle, mu, n, samples, seed, threads)
    return MCEstimate(prof.values[n], prof.stderr[n], samples, seed)


# -- spectral radius -----------------------------------------------------------------

@dataclass
class SpectralEstimate:
    """Estimate of lim kappa_{2n}^{1/2n} with a rigorous lower bound."""

    status: str
    estimate: float | None = None
    lower: float | None = None
    interval: tuple[float, float] | None = None
    exponent: float | None = None
    points: int = 0
    window: tuple[int, int] = (0, 0)
    notes: list = field(default_factory=list)


def _log_fraction(q: Fraction) -> float:
    return math.log(q.numerator) - math.log(q.denominator)


def spectral_radius_estimate(profile: ReturnProfile, window: tuple[int, int] | None = None,
                             min_points: int = 5) -> SpectralEstimate:
    """Fit log kappa_n = n log r - c log n + d over even n in the window,
    with 0 <= c <= 3.  The lower bound max kappa_n^{1/n} is rigorous for
    symmetric walks because kappa_{2n}^{1/2n} increases to r."""
    if profile.mode != "exact":
        raise ValueError("spectral radius estimation needs an exact profile")
    lo, hi = window if window is not None else (0, profile.horizon)
    hi = min(hi, profile.horizon)
    ns = [n for n in range(max(lo, 2), hi + 1) if n % 2 == 0 and profile.values[n] > 0]
    if len(ns) < min_points:
        return SpectralEstimate("inconclusive", points=len(ns), window=(lo, hi),
                                notes=[f"only {len(ns)} even points in window (need {min_points})"])
    if all(profile.values[n] == 1 for n in ns):
        return SpectralEstimate("ok", 1.0, 1.0, (1.0, 1.0), 0.0, len(ns), (lo, hi),
                                ["kappa_n = 1 on the whole window"])
    logs = np.array([_log_fraction(profile.values[n]) for n in ns])
    lower = max(math.exp(y / n) for y, n in zip(logs, ns)) * (1 - 1e-12)
    lower = min(lower, 1.0)
    A = np.column_stack([np.array(ns, float), -np.log(ns), np.ones(len(ns))])
    fit = lsq_linear(A, logs, bounds=([-np.inf, 0.0, -np.inf], [np.inf, 3.0, np.inf]))
    log_r, c, _ = fit.x
    resid = logs - A @ fit.x
    dof = max(1, len(ns) - 3)
    sigma2 = float(resid @ resid) / dof
    try:
        cov = sigma2 * np.linalg.inv(A.T @ A)
        se = math.sqrt(max(cov[0, 0], 0.0))
    except np.linalg.LinAlgError:
        se = float("inf")
    r = math.exp(log_r)
    est = min(max(r, lower), 1.0)
    interval = (max(lower, r * math.exp(-2 * se)), min(1.0, r * math.exp(2 * se)))
    interval = (min(interval[0], est), max(interval[1], est))
    notes = []
    if profile.certified_upto < hi:
        notes.append(f"window uses extrapolated values beyond n={profile.certified_upto}")
    return SpectralEstimate("ok", est, lower, interval, float(c), len(ns), (lo, hi), notes)
