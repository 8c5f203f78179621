"""
Geometry, clustering, prediction, distance analysis, synthetic cohorts and evaluation
"""
