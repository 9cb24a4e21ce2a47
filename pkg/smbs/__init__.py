"""
smbs - Bayesian nonparametric inference for discrete-time semi-Markov processes
Semi-Markov beta-Stacy priors, reinforced urn processes and predictive forecasting
"""

__version__ = "0.1.0"
