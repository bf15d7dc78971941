"""Rank-one metaplectic cocycles, their trivializations on arithmetic
subgroups, a discretized Weil representation of SL2^+-(R), and the theta
multiplier system on the group generated by Gamma(2), omega and h_-1."""

from __future__ import annotations

from .scalar import DomainError, ExactPhase
from .group import GeneratorWord, GroupElement, MembershipError

__all__ = ["DomainError", "ExactPhase", "GeneratorWord", "GroupElement", "MembershipError"]
__version__ = "0.1.0"
