"""Exact workbench for Coxeter words, preprojective ideal chains, quiver
and seed mutation, and loop-group minors, with one service layer exposed
through a CLI and an HTTP app."""

__version__ = "0.1.0"
