"""l2-penalized ADMM LP decoder plugin."""

from .plugin import PenalizedDecoder, PenalizedParams, penalized_decode

__all__ = ["PenalizedDecoder", "PenalizedParams", "penalized_decode"]
