"""
Analog Sim - gradient training on simulated non-ideal analog crossbar tiles
"""

__version__ = "1.0.0"
__description__ = "Desk-scale simulator for gradient training on analog crossbar hardware"
