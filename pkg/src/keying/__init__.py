# This file makes keying a proper Python package
