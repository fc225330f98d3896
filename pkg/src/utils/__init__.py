"""
Utilities package for the RPQ engine
"""
