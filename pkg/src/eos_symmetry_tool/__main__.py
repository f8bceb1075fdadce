#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
EOS Symmetry Tool
Main program entry point
"""

import sys

from .core.config import get_logger
from .ui import console


def excepthook_handler(exc_type, exc_value, exc_tb):
    """Log unhandled exceptions before the default hook prints them"""
    get_logger('main').critical("unhandled exception", exc_info=(exc_type, exc_value, exc_tb))
    sys.__excepthook__(exc_type, exc_value, exc_tb)


def main(argv=None):
    """Main entry point"""
    sys.excepthook = excepthook_handler
    return console.main(argv)


if __name__ == "__main__":
    sys.exit(main())
