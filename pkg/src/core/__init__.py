# This file makes core a proper Python package
