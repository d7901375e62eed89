"""Orthodual: finite ortholattices and UVO-spaces"""
