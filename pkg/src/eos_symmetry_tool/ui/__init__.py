# -*- coding: utf-8 -*-
"""
UI module
Contains the command-line interface
"""
