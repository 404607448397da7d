"""
Seeded stream derivation and artifact file helpers
"""
