"""halving_lab: exact-rational point sets rich in halving lines, with
independent brute-force certification of every structural claim."""

__version__ = "0.1.0"
