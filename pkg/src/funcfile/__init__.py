# This file makes funcfile a proper Python package
