"""
Report models for spreadhom.
"""