"""Trace generation, replay with verification, and the command line."""
