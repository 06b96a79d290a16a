"""Test package initialization file."""

# Tests for the FleetFlow pipeline
