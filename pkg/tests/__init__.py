# This file makes tests a proper Python package
