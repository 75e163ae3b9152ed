"""infinireg: exact computer algebra for the infinitesimal weight-two regulator."""

__version__ = "0.1.0"
