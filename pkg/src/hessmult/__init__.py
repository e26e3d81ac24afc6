"""Exact multiplicities of tabloid modules in regular semisimple Hessenberg cohomology."""

__version__ = "0.1.0"
