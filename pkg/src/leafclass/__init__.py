"""Exact and high-precision computations around the first Chern class of foliations.

Modules: :mod:`~leafclass.symbolics` (differential fields and forms),
:mod:`~leafclass.jets`, :mod:`~leafclass.wn` (cochains on formal vector
fields), :mod:`~leafclass.gk` (Gelfand-Kazhdan form), :mod:`~leafclass.reeb`,
:mod:`~leafclass.atlas`, :mod:`~leafclass.cech`, :mod:`~leafclass.site`,
:mod:`~leafclass.probe` and the :mod:`~leafclass.cli`.
"""

__version__ = "0.1.0"
