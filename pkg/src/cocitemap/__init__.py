"""Yearly co-citation groups, their timelines, metrics and topic tags."""

__version__ = "0.1.0"
