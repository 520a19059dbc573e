"""
単体的アフィン半群環の深さ
Semigroup Depth - Depth of Simplicial Affine Semigroup Rings
"""

__version__ = "1.0.0"
