"""
Rank accounting: why thermal inputs never yield pure letters
============================================================
Unitary encodings preserve the joint spectrum, so the letter states inherit
the full rank of the thermal input.  This script checks the product rank law
on randomized protocols, shows that register dephasing cannot lower rank, and
hunts (in vain) for pure letter states at increasingly cold temperatures.
"""

import numpy as np

from thermocode import (Hamiltonian, ProtocolInstance, dephase_register,
                        lemma1_check, linear_dependence, numerical_rank,
                        theorem1_nogo_probe)

# ----- product rank law on a randomized instance -----
inst = ProtocolInstance(hamiltonian=Hamiltonian.ladder(4), beta=1.5, n=4,
                        register_mode="haar", seed=42)
register = inst.register()
system = inst.system_state()
joint, ensemble = inst.encode()

report = lemma1_check(register.state, system, ensemble)
print("rank(rho_S) * rank(rho_R) =", report.lhs)
print("n * max_x rank(rho_x)     =", report.rhs)
print("inequality holds:", report.holds)
print("per-letter ranks:", report.per_state_ranks)

r_joint = numerical_rank(joint).value
print("\njoint rank:", r_joint, "=",
      numerical_rank(register.state).value, "*",
      numerical_rank(system).value, "(exact product)")

dephased = dephase_register(joint, (register.dim, inst.system_dim))
print("rank after register dephasing:", numerical_rank(dephased).value,
      "(never drops)")

# ----- linear (in)dependence of the letter states -----
print("\nletter states linearly dependent at beta=1.5:",
      linear_dependence(ensemble))
flat = ProtocolInstance(hamiltonian=Hamiltonian.ladder(4), beta=0.0, n=4)
_, hot = flat.encode()
print("letter states linearly dependent at beta=0:  ",
      linear_dependence(hot), "(all shifts fix the maximally mixed state)")

# ----- random search for forbidden pure letters -----
print("\nno-go probe: best purity over random protocols")
print(f"{'beta':>6} {'max purity':>18} {'min rank':>9} {'any pure':>9}")
for beta in (0.0, 1.0, 5.0, 20.0):
    probe = theorem1_nogo_probe(n=2, d_s=2, beta=beta, trials=40, seed=3)
    print(f"{beta:6.1f} {probe.max_purity:18.12f} {probe.min_rank:9d}"
          f" {str(probe.any_pure):>9}")
print("\neven at beta=20 the purity stays strictly below 1 - 1e-9:")
probe = theorem1_nogo_probe(n=2, d_s=2, beta=20.0, trials=40, seed=3)
print(f"1 - max purity = {1.0 - probe.max_purity:.3e}")
