"""qkm: exact computer algebra for quantized function algebras of Kac-Moody type."""

__version__ = "0.1.0"
