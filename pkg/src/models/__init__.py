# This file makes models a proper Python package
