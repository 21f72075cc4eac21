"""Exact K-theoretic classification invariants.

Integer-exact computation of six-term exact sequences of K-groups with
positive-cone annotations, extension classes, graph algebra K-theory,
and stationary dimension groups, together with decision procedures for
isomorphism of such invariants.
"""
from .matrix import IntMatrix, SmithDecomposition, snf

__all__ = ["IntMatrix", "SmithDecomposition", "snf"]
