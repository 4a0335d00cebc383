"""
Verification suites and reproduction checks run by the command line
"""
