"""
spreadhom: relative homological invariants of persistence modules over finite grids.
"""