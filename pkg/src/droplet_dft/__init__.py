"""droplet-dft - density-functional theory of quantum droplets."""

__version__ = "0.1.0"
