"""
API package for the spreadhom service.
"""