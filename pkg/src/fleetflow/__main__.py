#!/usr/bin/env python3
"""
FleetFlow package entry point.

This allows the package to be run as a module:
python -m fleetflow
"""

from .cli import app

if __name__ == "__main__":
    app()
