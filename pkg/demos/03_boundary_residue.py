"""Residue of full operator-matrix symbols on the finite cylinder.

The functional adds three blocks: the interior cosphere integral of the
degree -n symbol component, and (weighted by 2 pi) the boundary residues of
the traced singular Green part and of the boundary operator part.  Potential
and trace entries can never contribute, and on a closed torus the boundary
blocks disappear and the plain interior residue returns.
"""

import math

from ncres import (BdMSymbol, Cylinder, Torus, boundary_residue,
                   boundary_term, classical_symbol, compose_kt, hom_term,
                   laplace_shift_power, radial_term, simple_pole,
                   wodzicki_residue)

PI = math.pi

print("== interior block only: truncated inverse shifted Laplacian ==")
A = BdMSymbol(Cylinder(2), p=laplace_shift_power(2, -1.0, 2))
out = boundary_residue(A)
print(f"  interior = {out.interior.real:.8f}   (= 4 pi^3 = {4 * PI ** 3:.8f})")
print(f"  green    = {out.green.real:.8f}")
print(f"  boundary = {out.boundary_pdo.real:.8f}")

print("\n== boundary operator block: |xi'|^-1 on the two boundary circles ==")
s = classical_symbol([radial_term(-1.0, 1)], 1)
out = boundary_residue(BdMSymbol(Cylinder(2), s=s))
print(f"  boundary block = {out.boundary_pdo.real:.8f}   "
      f"(= 16 pi^2 = {16 * PI ** 2:.8f})")

print("\n== singular Green block: rank-one fiber at degree -2 ==")
b = hom_term(-2.0, 1, [(1.0, (0,), (0,), -2.0)])
g = boundary_term(b, compose_kt(simple_pole(1j), simple_pole(-1j)),
                  kind="green")
out = boundary_residue(BdMSymbol(Cylinder(2), green=(g,)))
print(f"  green block = {out.green.real:.8f}   "
      f"(= 8 pi^2 = {8 * PI ** 2:.8f})")

print("\n== potential/trace entries are invisible to the residue ==")
A_pert = BdMSymbol(
    Cylinder(2), p=A.p,
    potential=(boundary_term(hom_term(-2.0, 1, [(3.0, (1,), (0,), -2.0)]),
                             simple_pole(1j), kind="potential"),),
    trace_terms=(boundary_term(hom_term(-1.0, 1, [(2.0, (0,), (0,), -1.0)]),
                               simple_pole(-1j), kind="trace"),))
print("  totals bit-identical:",
      boundary_residue(A_pert).total == boundary_residue(A).total)

print("\n== empty boundary: reduces to the interior residue ==")
p = laplace_shift_power(2, -1.0, 2)
print("  equal:", boundary_residue(BdMSymbol(Torus(2), p=p)).total
      == wodzicki_residue(p, Torus(2)))
