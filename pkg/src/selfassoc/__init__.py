"""Exact-arithmetic verification toolkit for self-associated point sets.

Subpackages cover prime-field linear algebra, graded polynomial rings,
Groebner bases and syzygies, minimal free resolutions, the Grassmannian
variety constructors, point-configuration machinery, and the headline
reconstruction pipelines, plus a seeded experiment CLI.
"""

__version__ = "0.1.0"
