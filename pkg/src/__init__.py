"""
genbound - information-theoretic generalization bounds

Exact information measures on finite distributions, the auxiliary-distribution
bound evaluators, a Gaussian mean-estimation case study and regularized ERM
solvers, with brute-force oracles that check every identity numerically.
"""

__version__ = "1.0.0"
__author__ = "genbound developers"
