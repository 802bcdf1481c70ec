"""Desk-scale laboratory for adaptive reasoning-format selection with Ada-GRPO."""

__version__ = "0.1.0"
