"""
Unit tests package.

This package contains unit tests that test individual components in isolation,
typically using mocks for dependencies.
"""
