"""
Query package - regex parsing and automaton construction
"""
