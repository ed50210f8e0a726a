# This file makes linalg a proper Python package
