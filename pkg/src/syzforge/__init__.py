"""Exact computations with linear syzygies of toric and skew-matrix ideals.

Submodules: ``exactalg`` (fields, sparse linear algebra), ``polyring``,
``groebner``, ``simplicial``, ``kozrees`` (ideal constructors),
``toricbetti`` (toric ideals, multigraded Betti numbers), ``strand``
(2-linear strand, syzygy rank), ``witness``, ``census`` and ``cli``.
"""

__version__ = "0.1.0"
