"""Command routers"""
from app.routers import completions, lattices, spaces, verify
