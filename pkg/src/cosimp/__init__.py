"""Coherence for cosemisimplicial objects and deformations of pseudofunctors."""

__version__ = "0.1.0"
