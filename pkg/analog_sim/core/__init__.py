"""
Core: exceptions, logging, settings and the algorithm name registry
"""
