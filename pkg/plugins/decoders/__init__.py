"""Decoder plugins package."""
