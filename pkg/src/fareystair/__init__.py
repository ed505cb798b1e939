"""Farey-Brocot staircases, their Cantor dust, and the arithmetic behind them."""

__version__ = "0.1.0"
