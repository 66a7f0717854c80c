"""
strathom: homological invariants of finite-dimensional algebras.
Ring and homological epimorphisms, stratifying ideals, tilting, and the
derived constructions that relate them, in exact arithmetic.
"""

__version__ = "1.0.0"
