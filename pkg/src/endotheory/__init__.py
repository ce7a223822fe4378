"""Model checking and sentence translation for finite abelian p-groups and their endomorphism rings."""

__version__ = "0.1.0"
