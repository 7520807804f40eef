"""Point counts, traces and certificates for Verrill's rigid Calabi-Yau threefold."""

__version__ = "0.1.0"
