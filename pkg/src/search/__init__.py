"""
Search package - breadth-first searches, path DAG and enumeration
"""
