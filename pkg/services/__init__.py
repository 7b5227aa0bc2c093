"""Services package for the Vahlen/Weyl toolkit."""
