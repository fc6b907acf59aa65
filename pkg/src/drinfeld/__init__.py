"""Exact computations in the Drinfeld DGLA of a Lie algebra and its formality."""

__version__ = "0.1.0"
