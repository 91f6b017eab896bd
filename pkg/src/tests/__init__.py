"""
Test package for the minimal surface workbench.

Unit tests cover the numerical domain, functional tests the file formats and
the run cache, integration tests the pipeline and the management commands.
"""
