"""Complex symmetric and normal weighted composition operators on the Hardy space."""

__version__ = "0.1.0"
