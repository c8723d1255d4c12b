"""symkit: normalized traces of symmetric tensor powers, computed by several
independent routes, plus the identities and inequalities that tie them together."""
__version__ = "0.1.0"
