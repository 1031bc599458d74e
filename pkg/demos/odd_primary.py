"""
Splittings away from 2 for n = 3, 4, 5
======================================

With 2 inverted only the 3-primary operation P^1 can obstruct a splitting,
and it has room to act for n = 3, 4 only.

Run: python demos/odd_primary.py
"""

from suspsplit.decomposer import ManifoldInput, OperationProfile, decide
from suspsplit.torsion import FinAbGroup

T = FinAbGroup.from_pairs([(2, 1), (3, 1), (3, 2), (5, 1)])

# n = 3: the four P^1 cases
for prof in (
    OperationProfile(tertiary_nontrivial=None),
    OperationProfile(p1_case="a"),
    OperationProfile(p1_case="b", p1_r=1),
    OperationProfile(p1_case="c", p1_r=2),
):
    res = decide(ManifoldInput(3, 1, 1, T, profile=prof))
    print(f"n=3 {res.case:14s} {res.wedge}")

# n = 3 from coefficients on S^5 + P^5(3^r) + P^6(3^r); the talpha1 entry wins
coeffs = {"a": [2], "b": [0, 1], "c": [1, 0]}
res = decide(ManifoldInput(3, 1, 1, T, mode="attach", coeffs=coeffs))
print(f"n=3 {'attach':14s} {res.wedge}  ({res.case})")

# n = 4: P^1 either vanishes or hits a Bockstein class
for prof in (OperationProfile(), OperationProfile(p1_case="nontrivial", p1_r=1)):
    res = decide(ManifoldInput(4, 1, 1, T, profile=prof))
    print(f"n=4 {res.case:14s} {res.wedge}")

# n = 5: always a wedge of spheres and Moore spaces
print(f"n=5 {'':14s} {decide(ManifoldInput(5, 1, 1, T)).wedge}")

# refusing to answer without localization
try:
    decide(ManifoldInput(3, 1, 1, T, localize=False))
except ValueError as e:
    print("\nwithout localization:", e)
