"""
A tour of the homotopy tables
=============================

Homotopy groups of Moore spaces and Chang complexes near the bottom cell,
with named generators, and a few composites from the relation table.

Run: python demos/tables_tour.py
"""

from suspsplit.catalog import chang_eta, chang_r, moore, sphere
from suspsplit.pi_tables import bchi, compose, inclusion, moore_self_maps, pi, pinch

for r in (1, 2, 3):
    P = moore(2, r, 4)
    print(f"{P}:  pi_3 = {pi(3, P)},  pi_5 = {pi(5, P)},  pi_6 = {pi(6, P)}")

print(f"\n{chang_eta(3)}:  pi_6 = {pi(6, chang_eta(3))}")
for r in (1, 2):
    print(f"{chang_r(3, r)}:  pi_6 = {pi(6, chang_r(3, r))}")

print(f"\n[P^4(2), P^4(2)] = {moore_self_maps(3, 1, 1)}")
print(f"[P^4(4), P^4(8)] = {moore_self_maps(3, 2, 3)}")

for p, r in ((3, 1), (3, 2), (5, 1)):
    print(f"pi_8 {moore(p, r, 5)} = {pi(8, moore(p, r, 5))}")

# the lift of eta pinches back to eta, and B(chi) carries lifts upward
P = moore(2, 2, 4)
teta = pi(5, P).element("teta_2")
print("\npinch o teta_2       =", compose(pinch(P), teta))
print("B(chi^2_3) o teta_2  =", compose(bchi(4, 2, 2, 3), teta))

# alpha1 lands on twice the generator of pi_6 of C^5_eta
alpha1 = pi(6, sphere(3), prime=3).element("alpha1")
print("i o alpha1           =", compose(inclusion(chang_eta(3)), alpha1))
