"""Return probabilities of simple random walks on coset spaces.

On the coset tree of F2 modulo the centralizer of a generator the return
probability decays exponentially; on the quotient by the exponent-sum
kernel (a copy of Z^2) only like 1/n.  Exact rationals for small n, a
fitted decay rate for larger n, and a Monte-Carlo cross-check.
"""
from growthcrit import fixtures
from growthcrit.subgroups import centralizer, exponent_sum_kernel
from growthcrit.walk import WalkSpec, adaptive_return_profile, mc_return, spectral_radius_estimate

F = fixtures.free(2)
mu = WalkSpec.uniform(F)
for label, H in (("F2 / C(a)", centralizer(F.parse_word("a"))),
                 ("F2 / expsum", exponent_sum_kernel(F, [[1, 0], [0, 1]]))):
    prof = adaptive_return_profile(F, H, mu, 60)
    print(label)
    print("  kappa_2, kappa_4, kappa_6 =", *prof.values[2:7:2])
    est = spectral_radius_estimate(prof, (10, 60))
    print(f"  decay rate {est.estimate:.4f} (rigorous lower bound {est.lower:.4f}), "
          f"polynomial exponent {est.exponent:.2f}")
    mc = mc_return(F, H, mu, 10, 50_000, seed=1)
    print(f"  kappa_10 exact {float(prof.values[10]):.5f}, MC {mc.estimate:.5f} +- {mc.stderr:.5f}\n")
