"""Utilities package for the Vahlen/Weyl toolkit."""
