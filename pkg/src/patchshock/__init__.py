"""Equation-free patch dynamics with a double patch for shocks."""
