"""Thue-Morse block constructions of distributionally scrambled sets
without scrambled triples, with finite-horizon estimators and brute-force
cross-checks."""

__version__ = "0.1.0"
