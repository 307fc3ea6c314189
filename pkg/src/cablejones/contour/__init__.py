"""Contour-integral representations of the double sum and their numerical verification."""
