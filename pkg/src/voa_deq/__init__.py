"""Differential equations for correlation functions of intertwining operators
among C1-cofinite modules of vertex operator algebras."""

__version__ = "0.1.0"
