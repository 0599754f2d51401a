"""Error-detecting codes for asymmetric channels with limited noise."""

__version__ = "0.1.0"
