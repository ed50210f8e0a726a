# This file makes src a proper Python package
