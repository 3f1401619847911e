"""Relative stable categories of finite p-groups, computed by exact linear algebra."""

__version__ = "0.1.0"
