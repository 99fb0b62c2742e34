"""Two-sided bounds on the ball profile rho(n) of the regular representation.

For Z the ball indicator almost attains sqrt|B_n|; for F2 the lower bounds
stay far below sqrt|B_n| and under the polynomial bound (n+1)^(3/2).
"""
from growthcrit import fixtures
from growthcrit.specnorm import rho_profile

for G, n in ((fixtures.integers(1), 4), (fixtures.free(2), 3)):
    prof = rho_profile(G, n)
    print(G.name)
    print(prof.to_csv())
