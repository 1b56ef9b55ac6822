"""Homomorphism indistinguishability over recognisable graph classes via multiplicity automata."""
__version__ = "0.1.0"
