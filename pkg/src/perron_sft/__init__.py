"""Perron data of subshifts of finite type from correlation polynomials."""
__version__ = "0.1.0"
