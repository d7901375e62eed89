"""Lattices, spaces, maps, report schemas and errors"""
