"""
Suspension splitting for n = 2, both ways
=========================================

A 2-connected 7-dimensional complex M with H_3 = Z + Z/2 + Z/4 and H_4 free
of rank 1.  First the decision from an operation profile, then the same
manifold given by raw coefficients of its top attaching map.

Run: python demos/n2_walkthrough.py
"""

from suspsplit.decomposer import (
    ManifoldInput,
    OperationProfile,
    Sq2Data,
    attaching_vector,
    decide,
    homology_section,
    localize_result,
    profile_from_vector,
)
from suspsplit.normalizer import cofiber, normalize
from suspsplit.torsion import FinAbGroup

T = FinAbGroup.from_pairs([(2, 1), (2, 2)])

# Sq^2 from degree 3 into degree 5, as the matrices (A, B); the one eta-type
# entry on Z/4 survives, so the Chang complex C^5_2 appears in the section
sq2 = Sq2Data(A=((0,),), B=((1, 1),))
base = ManifoldInput(2, 1, 1, T, sq2=sq2, profile=OperationProfile(tertiary_nontrivial=None))
print("homology section:", homology_section(base))

# operation profiles: the top cell either splits off or is caught by an operation
for prof in (
    OperationProfile(tertiary_nontrivial=None),
    OperationProfile(theta_case="no_bockstein_link", theta_r=1, tertiary_nontrivial=None),
    OperationProfile(w2_nonzero=True, sq2h5_case="bockstein_image", sq2h5_r=2),
):
    res = decide(ManifoldInput(2, 1, 1, T, sq2=sq2, profile=prof))
    print(f"\n{res.case}:")
    print(res)

# the same kind of question from raw coefficients on each summand
coeffs = {"x": [1, 1], "eps": [1, 0], "y": [1], "z": [], "s": [1], "t": [0]}
inp = ManifoldInput(2, 1, 1, T, sq2=sq2, mode="attach", coeffs=coeffs)
v = attaching_vector(inp)
nf, trace = normalize(v)
print("\nraw vector:  ", v)
print("normal form: ", nf)
print("moves:       ", ", ".join(trace))
print("cone:        ", cofiber(nf))
print("profile read off the cone:", profile_from_vector(v))
print("decision:    ", decide(inp))

# after inverting 2 every case collapses to spheres and odd Moore spaces
print("\nlocalized:", localize_result(decide(inp)).wedge)
