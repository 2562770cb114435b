"""Holographic tensor-network codes built from Steane tensors, with exact ML decoding."""

__version__ = "0.1.0"
