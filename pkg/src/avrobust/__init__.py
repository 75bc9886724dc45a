"""Missing-video robustness evaluation for a desk-scale audiovisual transducer."""

__version__ = "0.1.0"
