"""
Counting non-generating pairs of 2x2 matrices
=============================================

Exact counts over F_q for q = 2..5, then the codimension read off from the
slope of log(count) against log(q).
"""
from genbound import codim_exact_slope, count_exhaustive, make_extension, matrix

counts = []
for p, m in [(2, 1), (3, 1), (2, 2), (5, 1)]:
    c = count_exhaustive(matrix(2, make_extension(p, m)), 2)
    counts.append(c)
    print(f"q={c.q}: {c.count} of {c.total} pairs fail to generate, {c.count / c.q ** 7:.2f} q^7")

est = codim_exact_slope(counts, expected_codim=1, constant=8)
print("codimension estimate", round(est.c_hat, 3))
for row in est.sandwich:
    print(dict(row))
