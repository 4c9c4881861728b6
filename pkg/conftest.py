"""
Makes the qred and tools packages importable when pytest runs from a source checkout.
"""
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
