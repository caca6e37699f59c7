"""Curve length, Frechet distance, line integrals and Burkill-Cesari integration."""
