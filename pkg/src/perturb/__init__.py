# This file makes perturb a proper Python package
