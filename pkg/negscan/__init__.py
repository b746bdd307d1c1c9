"""
Detection and classification of verbal negation with "não" in transcribed
Brazilian Portuguese speech, with agreement and evaluation tooling.
"""

__version__ = "1.0.0"
