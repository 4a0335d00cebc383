"""
Exact stability-preserving operators on polynomial coefficient sequences
"""

import logging

# Set up the logger
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger("lkp_stability")
