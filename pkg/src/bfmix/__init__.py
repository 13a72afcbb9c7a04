"""Exact symbolic-numeric integrability analysis for a coupled
condensate-oscillator Hamiltonian chain.

Submodules: series (truncated Puiseux arithmetic), elliptic (Weierstrass
data), model (Hamiltonian, closed-form orbits, integration), variational
(Frobenius solutions, higher variational equations, residue obstructions),
lame (solvability condition tree), heun (oscillator-plane reduction),
melnikov (separatrix splitting), verdict (classification), cli.
"""

__version__ = "0.1.0"
