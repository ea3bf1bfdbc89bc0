"""Interactive robust-LP workbench built on weighted analytic centers."""

__version__ = "0.1.0"
