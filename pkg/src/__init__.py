"""
Definite Bounds - Four-ball genus bounds from definite fillings of branched double covers
"""

__version__ = "1.0.0"
__author__ = "Definite Bounds Contributors"
