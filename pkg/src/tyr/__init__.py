"""Lifted classical planning on a parallel semi-naive Datalog engine."""

__version__ = "0.1.0"
