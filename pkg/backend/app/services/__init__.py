"""Lattice, space and duality services, one singleton per concern"""
