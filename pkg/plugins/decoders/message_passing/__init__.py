"""Message-passing decoder plugin (sum-product, min-sum, normalized min-sum)."""

from .plugin import MessagePassingDecoder, MpParams, MpVariant, mp_decode

__all__ = ["MessagePassingDecoder", "MpParams", "MpVariant", "mp_decode"]
