"""Exact classification of selfdual and distinguished cuspidal
representations over quadratic extensions of non-Archimedean local fields,
cross-validated by brute-force enumeration and a finite-group character
oracle.  All arithmetic is exact: integers, rational angles, and modular
splitting fields."""

__version__ = "0.1.0"
