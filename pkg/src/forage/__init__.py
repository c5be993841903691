"""Swarm foraging simulator with hunger/loneliness driven recruitment."""

__version__ = "0.1.0"
