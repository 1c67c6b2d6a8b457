"""
Core package for spreadhom: posets, linear algebra, modules and relative homology.
"""