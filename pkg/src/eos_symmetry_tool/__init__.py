# -*- coding: utf-8 -*-
"""
EOS Symmetry Tool
Elementary object systems: firing, automorphisms, canonical markings and
reduced state spaces.
"""

__version__ = "1.0.1"
