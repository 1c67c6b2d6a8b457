"""
API routes package for the spreadhom service.
"""

# Import and expose the router from routes.py
from src.api.routes.routes import router

__all__ = ['router']
