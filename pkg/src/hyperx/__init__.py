"""Desk-scale meta-RL laboratory.

Belief-conditioned policies meta-trained with two exploration bonuses
(hyper-state novelty via random network distillation, and belief-model
reconstruction error), on a suite of kinematic Bayes-adaptive environments.
"""

__version__ = "0.1.0"
