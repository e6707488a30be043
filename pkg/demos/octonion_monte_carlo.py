"""
Sampling split octonions
========================

Exhaustive counts are out of reach for triples of octonions, so we sample.
The non-generating fraction behaves like q^-c and two field sizes give c.
"""
from genbound import codim_from_mc, monte_carlo, prime_field, split_octonion

ests = [monte_carlo(split_octonion(prime_field(q)), 3, 200_000, seed=0) for q in (11, 101)]
for e in ests:
    print(f"q={e.q}: p_hat={e.p_hat:.2e}, 95% interval {e.interval[0]:.2e}..{e.interval[1]:.2e}")

c = codim_from_mc(*ests)
print(f"codimension about {c.c_hat:.2f} (interval {c.interval[0]:.2f}..{c.interval[1]:.2f})")
