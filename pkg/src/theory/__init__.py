"""
theory

Closed-form and numerical objects of the limit theory: bivariate tail
functionals, normalizing sequences with regime classification, limit-law
samplers, and the (statistic, regime) cell table that binds them together.

Submodules are imported directly (``from theory.normalizers import ...``).
"""
