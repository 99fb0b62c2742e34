"""A tour of the freeness and trace criteria on the bundled fixtures.

Each check prints its verdict and caveats; see the report's ``sequence``
field for the numbers behind the trend.  Takes about a minute.
"""
from growthcrit import criteria as cr
from growthcrit import fixtures

F2, H3, FxZ = fixtures.free(2), fixtures.heisenberg(), fixtures.free_times_z()
checks = [
    ("trace, F2, a", lambda: cr.check_trace_vanishing(F2, "a", 11)),
    ("trace, Heisenberg, x", lambda: cr.check_trace_vanishing(H3, "x", 12)),
    ("co-amenability, F2, a", lambda: cr.check_coamenability(F2, "a")),
    ("stationary, F2 x Z, t", lambda: cr.check_stationary_vanishing(FxZ, "t", None, 30)),
    ("star, F2, a vs b", lambda: cr.check_star_condition(F2, "a", ["b"], 4)),
    ("PC/SEC, Heisenberg, x", lambda: cr.classify_pc_sec(H3, "x", 14)),
]
for label, run in checks:
    r = run()
    print(f"{label:26s} {r.verdict}")
    for c in r.caveats:
        print(f"{'':26s}   - {c}")
