"""
Minimal surface workbench.

Weierstrass data, contour construction, discrete Plateau solves, conjugation,
symmetry extension and end classification, with a run cache and management
commands on top.
"""
