"""Closed-form network maxima from correlation spectra, and why both links
violating CHSH does not make a pair non-bilocal.

Every maximum here comes from the descending eigenvalues (t1, t2, t3) of
T^T T, where T is a state's 3x3 Pauli correlation matrix:

    single link      S_max = sqrt(t1 + t2)
    two-source pair  B_max = sqrt(sqrt(t1 t1') + sqrt(t2 t2'))

Run:  python3 demos/demo_closed_forms.py
"""

import math

from qnetmax import (
    bell_state,
    bilocality_max,
    chsh_max,
    classify_pair,
    colored_noise_state,
    correlation_matrix,
    make_state,
    t_spectrum,
    werner_state,
)


def show(name, state):
    sp = t_spectrum(correlation_matrix(state))
    print(f"  {name:<28} t-spectrum ({sp.t1:.4f}, {sp.t2:.4f}, {sp.t3:.4f})"
          f"   S_max = {chsh_max(state):.6f}")
    return state


print("Single-link CHSH maxima")
print("-----------------------")
singlet = show("singlet", bell_state("psi-"))
werner = show("werner(v=0.8)", werner_state(0.8))
show("werner(v=0.70)  (below 1)", werner_state(0.70))
show("werner(v=0.71)  (above 1)", werner_state(0.71))
print(f"  onset sits at v = 1/sqrt(2) = {1 / math.sqrt(2):.6f}\n")

print("Two-source pair maxima")
print("----------------------")
for label, s1, s2 in [
    ("singlet + singlet", singlet, singlet),
    ("werner(0.8) + werner(0.9)", werner, werner_state(0.9)),
    ("werner(0.8) + werner(0.6)", werner, werner_state(0.6)),
]:
    b = bilocality_max(s1, s2)
    print(f"  {label:<28} B_max = {b:.6f}   non-bilocal: {b > 1.0}")
print()

print("A pair where each link violates CHSH but the network does not")
print("-------------------------------------------------------------")
rho_ab = make_state(0.6 * bell_state("psi+").entries + 0.4 * bell_state("phi+").entries)
rho_bc = colored_noise_state(0.7, 1.0 / 3.0)
s_ab = chsh_max(rho_ab)
s_bc = chsh_max(rho_bc)
b_max = bilocality_max(rho_ab, rho_bc)
flags = classify_pair(rho_ab, rho_bc)
print(f"  link AB: S = {s_ab:.6f}  (> 1, violates CHSH)")
print(f"  link BC: S = {s_bc:.6f}  (> 1, violates CHSH)")
print(f"  pair:    B_max = {b_max:.6f}  (< 1, no network violation)")
print(f"  region flags (ab, bc, network): {flags.as_tuple()}")
print()
print("  The pair maximum couples the links spectrum-by-spectrum:")
print("  B_max^2 = sqrt(t1*t1') + sqrt(t2*t2').  Link AB concentrates its")
print("  strength in t1 (1.00, 0.04) while link BC spreads it (0.64, 0.49);")
print("  the mismatch drags the geometric means below 1 even though each")
print("  sum t1 + t2 exceeds 1.")
print()
print("  The reverse never happens: B_max^2 <= S_AB * S_BC, so a non-bilocal")
print("  pair always contains at least one CHSH-violating link.")
