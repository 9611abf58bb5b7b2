"""
naraforge: Narayana numbers that are concatenations of three repdigits.
"""
__version__ = "0.1.0"
