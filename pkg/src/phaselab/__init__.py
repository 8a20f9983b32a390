"""Finite-section laboratory for the number-phase operator pair on Hardy space."""
