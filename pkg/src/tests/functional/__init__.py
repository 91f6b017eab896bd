"""
Functional tests package.

This package contains functional tests that test components with real database
interaction and minimal mocking.
"""
