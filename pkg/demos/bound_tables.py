"""
Generator bounds over a d-dimensional base
==========================================
"""
from genbound import cor_azumaya
from genbound.bounds import bound_table

print(" d  upper  lower  (Azumaya, degree 3)")
for res in bound_table("azumaya", range(11), s=3):
    print(f"{res.query.d:2d}  {res.upper['azumaya_upper']:5d}  {res.lower['azumaya_lower']:5d}")

print("\n d  octonion upper")
for res in bound_table("octonion", (0, 1, 5)):
    print(f"{res.query.d:2d}  {res.upper['octonion_upper']:5d}")

for d, s in [(0, 2), (3, 3), (10, 3)]:
    v = cor_azumaya(d, s)
    print(f"d={d} s={s}:", "gen = 2" if v.conclusive else "inconclusive")
