"""l2-box ADMM decoder plugin."""

from .plugin import L2BoxDecoder, L2BoxParams, l2box_decode

__all__ = ["L2BoxDecoder", "L2BoxParams", "l2box_decode"]
