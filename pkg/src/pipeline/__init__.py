"""
Pipeline package - query configuration and the LangGraph query workflow
"""
