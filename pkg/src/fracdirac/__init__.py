"""Clifford-valued heat kernels for skew fractional Dirac evolution equations."""
