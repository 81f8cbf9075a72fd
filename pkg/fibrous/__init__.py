"""
fibrous-spaces - cartesian spacial fibrous preorders over finite carriers
"""

__version__ = "0.1.0"
