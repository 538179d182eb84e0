"""Covering-link calculus toolkit.

Diagrams as Morse words, doubling/Bing operators, exact Levine-Tristram
signature profiles, cyclic branched-cover constructions, and a
forward-chaining ledger for bipolar height bounds.
"""

__version__ = "0.1.0"
