"""Plugins package for the l2-box decoder workbench."""
