"""Effective Artin approximation tools for binomial equations."""
