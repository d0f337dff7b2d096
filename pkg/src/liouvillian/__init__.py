"""Hamiltonian, non-Hermitian Hamiltonian and hybrid-Liouvillian construction."""
