"""Tests for droplet-dft."""
