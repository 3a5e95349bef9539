"""Physical action classification from multi-channel surface EMG."""

__version__ = "0.1.0"
