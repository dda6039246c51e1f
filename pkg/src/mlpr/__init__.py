"""
Multilinear PageRank solvers with the Predictor-Corrector-Newton method.
"""
