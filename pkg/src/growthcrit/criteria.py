"""Growth classification and the vanishing/freeness criteria, each emitting a
CriterionReport with its bound sequence, trend statistic and verdict."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .enumeration import (DEFAULT_BUDGET, BallIndex, BudgetExceeded, GrowthSeries,
                          conjugacy_class_growth, enumerate_ball, word_length)
from .groups import Element, Group, commutes, conjugate
from .reports import CriterionReport, VerificationReport
from .schreier import verify_phi_injection, verify_psi_injection
from .specnorm import rho_upper
from .subgroups import SubgroupOracle, centralizer
from .walk import (RadiusError, ReturnProfile, WalkSpec, adaptive_return_profile, mc_return_profile,
                   spectral_radius_estimate)

STAR_CAVEAT = "finitely many witnesses checked; the condition quantifies over all gamma outside C"
HEURISTIC_CAVEAT = "heuristic upper bound"
RHO_BALL_BUDGET = 200_000


@dataclass
class Thresholds:
    trend_slope: float = -0.02
    exp_slope: float = 0.05
    r2: float = 0.98
    coamen_upper: float = 0.98   # 1 - 0.02
    coamen_lower: float = 0.995  # 1 - 0.005


DEFAULTS = Thresholds()


# -- growth classification -----------------------------------------------------------

@dataclass
class GrowthClass:
    kind: str                      # polynomial | exponential | subexponential | inconclusive
    estimate: float | None = None  # degree or rate
    ci: float | None = None
    window: tuple[int, int] = (0, 0)
    r2_loglog: float | None = None
    r2_semilog: float | None = None
    slope_loglog: float | None = None
    slope_semilog: float | None = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _fit(x: np.ndarray, y: np.ndarray, parity: np.ndarray) -> tuple[float, float, float, float]:
    """y ~ s x + d + e [n odd]; returns slope, its std error, R^2, RSS."""
    cols = [x, np.ones_like(x)]
    if parity.any() and not parity.all() and len(x) >= 4:
        cols.append(parity.astype(float))
    A = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    rss = float(resid @ resid)
    tss = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if tss == 0 else 1 - rss / tss
    dof = max(1, len(x) - A.shape[1])
    try:
        se = math.sqrt(max(rss / dof * np.linalg.inv(A.T @ A)[0, 0], 0.0))
    except np.linalg.LinAlgError:
        se = float("inf")
    return float(coef[0]), se, r2, rss


def classify_growth(series: GrowthSeries | Sequence[int], window: tuple[int, int] | None = None,
                    thresholds: Thresholds = DEFAULTS, min_points: int = 6) -> GrowthClass:
    """Polynomial / exponential / subexponential from log-log and semilog fits.

    The log-log fit regresses on log(n+1), the natural scale for counts
    over radii 0..n.  Both fits carry a parity term so that period-two
    staircases (classes living in odd lengths only, bipartite graphs) fit as
    cleanly as smooth series; for smooth series the term is negligible.
    """
    if isinstance(series, GrowthSeries):
        values, exact = list(series.values), list(series.exact)
    else:
        values, exact = list(series), [True] * len(series)
    lo, hi = window if window is not None else (0, len(values) - 1)
    lo = max(lo, 0)
    hi = min(hi, len(values) - 1)
    ns = [n for n in range(lo, hi + 1) if values[n] > 0 and exact[n]]
    if len(ns) < min_points:
        return GrowthClass("inconclusive", window=(lo, hi),
                           notes=[f"{len(ns)} exact positive points in window (need {min_points})"])
    vals = np.array([float(values[n]) for n in ns])
    if np.all(vals == vals[0]):
        return GrowthClass("polynomial", 0.0, 0.0, (lo, hi), 1.0, 1.0, 0.0, 0.0, ["constant series"])
    n_arr = np.array(ns, float)
    logn = np.log(n_arr + 1)
    y = np.log(vals)
    parity = (np.array(ns) % 2 == 1)
    s2, se2, r2s, rss_s = _fit(n_arr, y, parity)
    s1, se1, r2l, rss_l = _fit(logn, y, parity)
    tail = slice(len(ns) - min(len(ns), max(len(ns) // 2, 5)), len(ns))
    s1_tail = _fit(logn[tail], y[tail], parity[tail])[0]
    s2_tail = _fit(n_arr[tail], y[tail], parity[tail])[0]
    base = dict(window=(lo, hi), r2_loglog=r2l, r2_semilog=r2s, slope_loglog=s1, slope_semilog=s2)
    is_exp = s2 > thresholds.exp_slope and r2s > thresholds.r2
    is_poly = r2l > thresholds.r2 and s1 >= 0 and abs(s1_tail - s1) < 0.5
    if is_exp and is_poly:
        is_exp = not rss_l < 0.5 * rss_s
        is_poly = not is_exp
    if is_exp:
        rate = math.exp(s2_tail)
        ci = rate * (math.exp(2 * se2 + abs(s2_tail - s2)) - 1)
        return GrowthClass("exponential", rate, ci, **base)
    if is_poly:
        return GrowthClass("polynomial", s1_tail, 2 * se1 + abs(s1_tail - s1), **base)
    thirds = [slice(0, len(ns) // 3), slice(len(ns) // 3, 2 * len(ns) // 3),
              slice(2 * len(ns) // 3, len(ns))]
    local = []
    for sl in thirds:
        xs, ys = n_arr[sl], y[sl]
        local.append(float(np.polyfit(xs, ys, 1)[0]) if len(xs) >= 2 else float("nan"))
    if s2 > 0 and all(a > b for a, b in zip(local, local[1:])):
        return GrowthClass("subexponential", None, None, notes=[f"local semilog slopes {local}"], **base)
    return GrowthClass("inconclusive", None, None, **base)


# -- trend statistic -----------------------------------------------------------------

def trend_statistic(seq: Sequence[float], thresholds: Thresholds = DEFAULTS) -> dict:
    """Tail slope of log s_n over the last max(4, ceil(n_max/3)) points.

    "Decreasing" means slope < threshold and the tail strictly decreasing at
    lag 1, or at lag 2 when the sequence has a period-two staircase.
    Zero entries (exact vanishing) are dropped before taking logs.
    """
    pts = [(n, float(v)) for n, v in enumerate(seq) if v is not None and v > 0]
    n_max = len(seq) - 1
    k = max(4, math.ceil(n_max / 3))
    tail = pts[-k:]
    if len(tail) < 4:
        return {"status": "too-short", "points": len(tail)}
    xs = np.array([n for n, _ in tail], float)
    ys = np.log([v for _, v in tail])
    slope = float(np.polyfit(xs, ys, 1)[0])
    lag = None
    for p in (1, 2):
        if all(ys[i + p] < ys[i] for i in range(len(ys) - p)):
            lag = p
            break
    decreasing = slope < thresholds.trend_slope and lag is not None
    return {"status": "ok", "slope": slope, "tail_start": int(xs[0]), "tail_end": int(xs[-1]),
            "points": len(tail), "lag": lag, "decreasing": decreasing}


def _verdict(trend: dict) -> str:
    if trend.get("status") != "ok":
        return "inconclusive"
    if trend["decreasing"]:
        return "supported"
    if trend["slope"] >= 0:
        return "not-supported"
    return "inconclusive"


# -- helpers -------------------------------------------------------------------------

def _as_element(group: Group, g: Element | str) -> Element:
    return g if isinstance(g, Element) else group.parse_word(g)


class _RhoUpper:
    """rho upper bounds with the ambient ball used where it fits the budget."""

    def __init__(self, group: Group, radius: int, budget: int = RHO_BALL_BUDGET):
        self.group = group
        try:
            self.ball = enumerate_ball(group, radius, budget)
        except BudgetExceeded as exc:
            self.ball = exc.partial
        self.caveats: set[str] = set()
        self.sources: dict = {}

    def __call__(self, n: int) -> float:
        ub = rho_upper(self.group, n, self.ball)
        if not ub.certified:
            self.caveats.add(f"{HEURISTIC_CAVEAT}: {ub.note}")
        if ub.source in ("analytic", "assumed"):
            self.sources[ub.source] = ub.note
        return ub.value


def _provenance(budget: int, **extra) -> dict:
    out = {"budget": budget}
    out.update(extra)
    return out


# -- trace vanishing -----------------------------------------------------------------

def check_trace_vanishing(group: Group, g: Element | str, n_max: int, conj_budget: int | None = None,
                          budget: int = DEFAULT_BUDGET, thresholds: Thresholds = DEFAULTS) -> CriterionReport:
    """s_n = rho_upper(n) * alpha_Cl(g)(n)^(-1/2); decay to 0 witnesses
    rho^2 = o(alpha_Cl(g)) at the scale computed."""
    g = _as_element(group, g)
    ball = enumerate_ball(group, n_max, budget)
    alpha = conjugacy_class_growth(group, g, n_max, conj_budget, ball, budget)
    rho = _RhoUpper(group, n_max, min(budget, RHO_BALL_BUDGET))
    rows, seq = [], []
    for n in range(n_max + 1):
        r = rho(n)
        a = alpha.values[n]
        s = r / math.sqrt(a) if a > 0 else None
        seq.append(s)
        rows.append({"n": n, "rho_upper": r, "alpha_class": a, "exactness": alpha.exactness(n), "s": s})
    trend = trend_statistic(seq, thresholds)
    caveats = sorted(rho.caveats)
    if not alpha.all_exact:
        caveats.append("class counts are lower bounds (no conjugacy oracle)")
    return CriterionReport("trace_vanishing", _verdict(trend), {"group": group.describe(), "g": str(g),
                           "n_max": n_max}, rows, trend, caveats,
                           _provenance(budget, conj_budget=conj_budget if conj_budget is not None else n_max,
                                       rho_bounds=rho.sources, thresholds=asdict(thresholds)))


# -- star condition ------------------------------------------------------------------

def _centralizer_ball(group: Group, g: Element, radius: int, budget: int) -> BallIndex:
    """A ball whose elements include C(g) cap B_radius with correct lengths:
    an isometric subgroup containing C(g) when known, else the ambient ball."""
    hull = group.centralizer_hull(g)
    gens = None if hull is None else [group.generators[i] for i in hull]
    return enumerate_ball(group, radius, budget, gens)


def _count_by_length(ball: BallIndex, predicate, n_max: int) -> list[int]:
    per = [0] * (n_max + 1)
    for k in range(min(ball.radius, n_max) + 1):
        for x in ball.sphere(k):
            if predicate(x):
                per[k] += 1
    out, tot = [], 0
    for c in per:
        tot += c
        out.append(tot)
    return out


def default_witnesses(group: Group, g: Element, radius: int = 3, count: int = 4,
                      budget: int = DEFAULT_BUDGET) -> list[Element]:
    """The first few elements of B_radius outside C(g), in BFS order."""
    ball = enumerate_ball(group, radius, budget)
    return [x for x in ball.elements if not commutes(x, g)][:count]


def check_star_condition(group: Group, g: Element | str, witnesses: Sequence[Element | str] | None,
                         n_max: int, budget: int = DEFAULT_BUDGET,
                         thresholds: Thresholds = DEFAULTS) -> CriterionReport:
    """r_n = rho_upper(3n)^2 * alpha_{C cap gCg^-1}(2n) / alpha_C(n) per witness gamma."""
    g = _as_element(group, g)
    C = centralizer(g)
    inputs = {"group": group.describe(), "g": str(g), "n_max": n_max}
    if witnesses is None:
        witnesses = default_witnesses(group, g, budget=budget)
    wits = [_as_element(group, w) for w in witnesses]
    caveats = [STAR_CAVEAT]
    valid, skipped = [], []
    for w in wits:
        (skipped if C.contains(w) else valid).append(w)
    for w in skipped:
        caveats.append(f"witness {w} lies in C; reported not-applicable")
    inputs["witnesses"] = [str(w) for w in wits]
    if not valid:
        return CriterionReport("star_freeness", "not-applicable", inputs, [], {}, caveats + [
            "no witness outside the centralizer"], _provenance(budget))
    cball = _centralizer_ball(group, g, 2 * n_max, budget)
    alpha_c = _count_by_length(cball, C.contains, 2 * n_max)
    rho = _RhoUpper(group, 3 * n_max, min(budget, RHO_BALL_BUDGET))
    rows, verdicts, trends = [], [], {}
    for w in valid:
        gw = conjugate(w, g)
        inter = _count_by_length(cball, lambda x: C.contains(x) and commutes(x, gw), 2 * n_max)
        seq = []
        for n in range(n_max + 1):
            r = rho(3 * n) ** 2 * inter[2 * n] / alpha_c[n]
            seq.append(r)
            rows.append({"witness": str(w), "n": n, "rho_upper_3n": rho(3 * n),
                         "alpha_intersection_2n": inter[2 * n], "alpha_C_n": alpha_c[n], "r": r})
        t = trend_statistic(seq, thresholds)
        trends[str(w)] = t
        verdicts.append(_verdict(t))
    if all(v == "supported" for v in verdicts):
        verdict = "supported"
    elif any(v == "not-supported" for v in verdicts):
        verdict = "not-supported"
    else:
        verdict = "inconclusive"
    caveats += sorted(rho.caveats)
    return CriterionReport("star_freeness", verdict, inputs, rows, trends, caveats,
                           _provenance(budget, rho_bounds=rho.sources,
                                       centralizer_ball=("hull" if group.centralizer_hull(g) else "ambient"),
                                       thresholds=asdict(thresholds)))


# -- collision lemma -----------------------------------------------------------------

def verify_collision_lemma(group: Group, g: Element | str, conjugators: Sequence[Element | str], N: int,
                           budget: int = DEFAULT_BUDGET) -> VerificationReport:
    """Exhaustive check of the collision step for conjugators h_0, ..., h_m.

    With g_i = h_i g h_i^-1, C_i = C(g_i): whenever a g_i a^-1 = b g_j b^-1
    for a, b in C_0 cap B_N, b^-1 a lies in C_0 cap h_j h_i^-1 C_i.  Then a
    greedy maximal A in C_0 cap B_N on which every s -> s g_i s^-1 is
    injective must have |A| >= |C_0 cap B_N| / M, with
    M = m^2 max_ij |B_2N cap C_0 cap h_j h_i^-1 C_i|.  Indices run over
    1..m, or over {0} alone when m = 0.
    """
    g = _as_element(group, g)
    hs = [_as_element(group, h) for h in conjugators]
    if not hs:
        raise ValueError("at least one conjugator h_0 is needed")
    gs = [conjugate(h, g) for h in hs]
    C = centralizer(g)
    for i in range(1, len(hs)):
        if C.contains(~hs[i] * hs[0]):
            return VerificationReport("collision_lemma", "not-applicable",
                                      {"reason": f"h_0 C = h_{i} C"})
    m = len(hs) - 1
    idx = list(range(1, m + 1)) if m else [0]
    ball = enumerate_ball(group, 2 * N, budget)
    g0 = gs[0]
    c0_ball = [x for x in ball.elements[:ball.size(N)] if commutes(x, g0)]
    conj = {(x.form, i): conjugate(x, gs[i]).form for x in c0_ball for i in idx}
    collisions, failures = 0, []
    for a in c0_ball:
        for b in c0_ball:
            binv_a = ~b * a
            for i in idx:
                for j in idx:
                    if conj[a.form, i] != conj[b.form, j]:
                        continue
                    collisions += 1
                    shifted = hs[i] * ~hs[j] * binv_a
                    if not (commutes(binv_a, g0) and commutes(shifted, gs[i])):
                        failures.append({"a": str(a), "b": str(b), "i": i, "j": j})
    M_counts = []
    for i in idx:
        for j in idx:
            shift = hs[i] * ~hs[j]
            M_counts.append(sum(1 for x in ball.elements
                                if commutes(x, g0) and commutes(shift * x, gs[i])))
    M = len(idx) ** 2 * max(M_counts)
    A, images = [], [set() for _ in idx]
    for s in c0_ball:
        ims = [conj[s.form, i] for i in idx]
        if all(im not in images[k] for k, im in enumerate(ims)):
            A.append(s)
            for k, im in enumerate(ims):
                images[k].add(im)
    bound_ok = len(A) * M >= len(c0_ball)
    ok = not failures and bound_ok
    details = {"N": N, "m": m, "collisions_checked": collisions, "failures": len(failures),
               "C0_ball": len(c0_ball), "A": len(A), "M": M, "A_bound_holds": bound_ok}
    return VerificationReport("collision_lemma", "verified" if ok else "failed", details, failures[:20])


# -- stationary vanishing ------------------------------------------------------------

class HypothesisViolation(ValueError):
    """The walk measure violates a hypothesis of the criterion (not a lack of evidence)."""


def _kappa(group: Group, oracle: SubgroupOracle, mu: WalkSpec, N: int, budget: int,
           mc_samples: int, seed: int) -> tuple[ReturnProfile, list[str]]:
    """Exact kappa up to N where a Schreier graph within budget allows it,
    else Monte Carlo."""
    caveats = []
    try:
        prof = adaptive_return_profile(group, oracle, mu, N, budget)
        if prof.certified_upto < N:
            caveats.append(f"kappa_n for n > {prof.certified_upto} extends settled layer laws "
                           f"(Schreier graph radius {prof.descriptor['radius']})")
        return prof, caveats
    except RadiusError:
        pass
    prof = mc_return_profile(group, oracle, mu, N, mc_samples, seed)
    caveats.append(f"kappa_n estimated by Monte Carlo ({mc_samples} samples, seed {seed})")
    return prof, caveats


def check_stationary_vanishing(group: Group, g: Element | str, mu: WalkSpec | None, n_max: int,
                               budget: int = 200_000, mc_samples: int = 100_000, seed: int = 0,
                               thresholds: Thresholds = DEFAULTS) -> CriterionReport:
    """t_n = rho_upper(2nN + |g|) * kappa_n^(1/4), kappa on G/C(g)."""
    g = _as_element(group, g)
    mu = WalkSpec.uniform(group) if mu is None else mu
    if not mu.symmetric:
        raise HypothesisViolation("the walk measure must be symmetric")
    N = max(1, mu.max_length)
    glen = word_length(group, g)
    prof, caveats = _kappa(group, centralizer(g), mu, n_max, budget, mc_samples, seed)
    rho = _RhoUpper(group, min(2 * n_max * N + glen, 12), min(budget, RHO_BALL_BUDGET))
    rows, seq = [], []
    for n in range(n_max + 1):
        r = rho(2 * n * N + glen)
        k = prof.values[n]
        t = r * float(k) ** 0.25
        seq.append(t)
        rows.append({"n": n, "rho_upper": r, "kappa": k, "t": t})
    trend = trend_statistic(seq, thresholds)
    caveats += sorted(rho.caveats)
    inputs = {"group": group.describe(), "g": str(g), "mu": mu.describe(), "n_max": n_max,
              "step_length": N, "g_length": glen}
    return CriterionReport("stationary_vanishing", _verdict(trend), inputs, rows, trend, caveats,
                           _provenance(budget, kappa_method=prof.method, rho_bounds=rho.sources,
                                       seed=seed if prof.mode == "mc" else None,
                                       thresholds=asdict(thresholds)))


# -- co-amenability ------------------------------------------------------------------

def check_coamenability(group: Group, g: Element | str | None, window: tuple[int, int] = (10, 60),
                        oracle: SubgroupOracle | None = None, mu: WalkSpec | None = None,
                        budget: int = 200_000, thresholds: Thresholds = DEFAULTS) -> CriterionReport:
    """Spectral radius of the walk on G/C(g).  Radius < 1 means C(g) is not
    co-amenable.  ``oracle`` replaces C(g) for diagnostic runs on other
    subgroups."""
    mu = WalkSpec.uniform(group) if mu is None else mu
    if oracle is None:
        g = _as_element(group, g)
        oracle = centralizer(g)
    inputs = {"group": group.describe(), "subgroup": oracle.describe(), "window": list(window)}
    caveats = []
    if oracle.kind != "centralizer":
        caveats.append("diagnostic mode: subgroup is not a centralizer")
    try:
        prof = adaptive_return_profile(group, oracle, mu, window[1], budget)
    except RadiusError as exc:
        return CriterionReport("coamenability", "inconclusive", inputs, [], {},
                               caveats + [str(exc)], _provenance(budget))
    if prof.certified_upto < window[1]:
        caveats.append(f"kappa_n for n > {prof.certified_upto} extends settled layer laws")
    est = spectral_radius_estimate(prof, window)
    rows = [{"n": n, "kappa": prof.values[n]} for n in range(window[0], window[1] + 1)]
    trend = {k: v for k, v in asdict(est).items() if k != "notes"}
    if est.status != "ok":
        verdict = "inconclusive"
        caveats += est.notes
    elif est.interval[1] < thresholds.coamen_upper:
        verdict = "supported"
        caveats.append("not co-amenable implies free action only under the SRD hypothesis on the group")
    elif est.lower >= thresholds.coamen_lower:
        verdict = "not-supported"
    elif est.estimate >= thresholds.coamen_lower:
        verdict = "not-supported"
        caveats.append("radius 1 read from the fitted estimate; the rigorous lower bound "
                       f"{est.lower:.4f} is below {thresholds.coamen_lower}")
    else:
        verdict = "inconclusive"
    return CriterionReport("coamenability", verdict, inputs, rows, trend, caveats + est.notes,
                           _provenance(budget, kappa_method=prof.method, graph_radius=prof.descriptor["radius"],
                                       thresholds=asdict(thresholds)))


# -- PC / SEC ------------------------------------------------------------------------

def classify_pc_sec(group: Group, g: Element | str, n_max: int, conj_budget: int | None = None,
                    budget: int = DEFAULT_BUDGET, thresholds: Thresholds = DEFAULTS) -> CriterionReport:
    """Classify the conjugacy-class growth of g: PC-candidate (polynomial),
    SEC-candidate (subexponential, not polynomial), or neither."""
    g = _as_element(group, g)
    alpha = conjugacy_class_growth(group, g, n_max, conj_budget, budget=budget)
    caveats = []
    if alpha.all_exact:
        gc = classify_growth(alpha, thresholds=thresholds)
    else:
        gc = classify_growth(list(alpha.values), thresholds=thresholds)
        caveats.append("class counts are lower bounds; only an exponential lower bound is conclusive")
    label = {"polynomial": "PC-candidate", "subexponential": "SEC-candidate",
             "exponential": "neither"}.get(gc.kind, "inconclusive")
    if not alpha.all_exact and label in ("PC-candidate", "SEC-candidate"):
        label = "inconclusive"
    verdict = {"PC-candidate": "supported", "SEC-candidate": "supported",
               "neither": "not-supported"}.get(label, "inconclusive")
    rows = [{"n": n, "alpha_class": v, "exactness": alpha.exactness(n)} for n, v in enumerate(alpha.values)]
    trend = dict(gc.to_dict(), label=label)
    return CriterionReport("pc_sec", verdict, {"group": group.describe(), "g": str(g), "n_max": n_max},
                           rows, trend, caveats + gc.notes,
                           _provenance(budget, conj_budget=conj_budget if conj_budget is not None else n_max))


# -- freeness routing ----------------------------------------------------------------

def centralizer_growth(group: Group, g: Element, n_max: int, budget: int = RHO_BALL_BUDGET) -> GrowthSeries:
    """Exact alpha_C(n), stopping at the last radius whose ball fits the budget."""
    notes = []
    try:
        ball = _centralizer_ball(group, g, n_max, budget)
    except BudgetExceeded as exc:
        ball = exc.partial
        n_max = ball.radius
        notes.append(f"centralizer counts truncated at radius {n_max} (budget {budget})")
    C = centralizer(g)
    return GrowthSeries(_count_by_length(ball, C.contains, n_max), [True] * (n_max + 1), f"C({g})", notes)


def check_freeness(group: Group, g: Element | str, n_max: int, witnesses=None,
                   window: tuple[int, int] = (10, 60), budget: int = DEFAULT_BUDGET,
                   thresholds: Thresholds = DEFAULTS) -> CriterionReport:
    """Route by the growth of C(g): subexponential (incl. polynomial) goes to
    the co-amenability test, otherwise to the star condition."""
    g = _as_element(group, g)
    growth = centralizer_growth(group, g, 2 * n_max, min(budget, RHO_BALL_BUDGET))
    gc = classify_growth(growth, thresholds=thresholds)
    if gc.kind in ("polynomial", "subexponential"):
        branch = "coamenability"
        report = check_coamenability(group, g, window, thresholds=thresholds)
    else:
        branch = "star_freeness"
        report = check_star_condition(group, g, witnesses, n_max, budget, thresholds)
    report.provenance["routing"] = {"branch": branch, "centralizer_growth": gc.to_dict(),
                                    "centralizer_counts": growth.values}
    report.caveats.insert(0, f"freeness routing chose {branch} (centralizer growth {gc.kind})")
    report.caveats[1:1] = growth.notes
    return report


# -- injections ----------------------------------------------------------------------

def injection_reports(group: Group, h: Element | str | None, n_max: int,
                      budget: int = DEFAULT_BUDGET) -> list[CriterionReport]:
    """Phi_n (for h) and Psi_n checks for n <= n_max as criterion reports."""
    out = []
    if h is not None:
        h = _as_element(group, h)
        out.append(_injection_report("phi_injection", [verify_phi_injection(group, h, n, budget)
                                                        for n in range(n_max + 1)], {"h": str(h)}))
    out.append(_injection_report("psi_injection", [verify_psi_injection(group, n, budget)
                                                    for n in range(n_max + 1)], {}))
    for r in out:
        r.inputs["group"] = group.describe()
        r.inputs["n_max"] = n_max
    return out


def _injection_report(name: str, reps: list[VerificationReport], inputs: dict) -> CriterionReport:
    rows = [{"n": n, "status": r.status,
             **{k: v for k, v in r.details.items() if k != "n" and not isinstance(v, (list, dict))}}
            for n, r in enumerate(reps)]
    if all(r.status == "not-applicable" for r in reps):
        verdict = "not-applicable"
    elif all(r.passed or r.status == "not-applicable" for r in reps):
        verdict = "supported"
    else:
        verdict = "not-supported"
    caveats = sorted({c for r in reps for c in r.notes})
    return CriterionReport(name, verdict, inputs, rows, {}, caveats, {})
