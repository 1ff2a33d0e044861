"""Leg-activity classification from on-body creeping-wave S21 traces."""

__version__ = "0.1.0"
