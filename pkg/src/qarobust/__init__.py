"""Adversarial attack generation and robustness evaluation for extractive QA."""

__version__ = "0.1.0"
