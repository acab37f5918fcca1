"""
Handlers package for dispatching corpus runs across worker processes
"""
