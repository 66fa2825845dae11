"""Rigs with derivations and four concrete models of them.

Submodules: ``rigcore`` (law harness and small instances), ``langrig``
(Brzozowski derivatives), ``species`` (cardinality sequences of species),
``polyrig`` (polynomial and differential-polynomial rigs), ``lattice``
(co-Heyting boundaries), ``cli``.
"""

__version__ = "0.1.0"
