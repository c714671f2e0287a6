"""Build bounded-degree simplicial complexes with prescribed torsion and certify them."""

__version__ = "0.1.0"
