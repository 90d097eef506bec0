"""Exact local invariants of function germs and two-route checks of Brasselet-number identities."""

__version__ = "0.1.0"
