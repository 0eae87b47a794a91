"""amdsl: batch compiler toolchain for a textual motor-skill architecture DSL."""

__version__ = "0.1.0"
