# This file makes the 'inphase' directory a Python package.
__version__ = "0.1.0"
