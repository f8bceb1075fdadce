# -*- coding: utf-8 -*-
"""
Core module
Contains the nets, the object system semantics, symmetry and exploration
"""
