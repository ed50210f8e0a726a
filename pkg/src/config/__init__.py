# This file makes config a proper Python package
