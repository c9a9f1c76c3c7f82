"""Recurrence quantification for odometer-type interval maps of type 2^infinity."""

__version__ = "0.1.0"
