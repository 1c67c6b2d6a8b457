"""
Utilities for spreadhom.
"""