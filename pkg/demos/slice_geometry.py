"""
The slice Y and the stratum X_1
===============================

Over F_5 with s = 3, the family Y meets X_1 only at x = 0, and that point
has no commuting restriction, so it lies outside T_2.
"""
from genbound import default_Y_spec, intersect_Y_X1

for r in (2, 3):
    res = intersect_Y_X1(default_Y_spec(r), max_ext_degree=3)
    print(f"r={r}: scanned {res.points} points, hits {res.hits}, in T_2: {res.in_T2}")

# rank strata of r-tuples in F_q^n
from genbound import rank_stratum_count

q, n, r = 3, 3, 3
row = [rank_stratum_count(q, n, r, s) for s in range(4)]
print("rank strata", row, "sum", sum(row), "=", q ** (n * r))
