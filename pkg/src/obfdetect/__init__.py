"""Static detection of code obfuscation in Android APKs.

Parses DEX bytecode into symbol tables, computes a 37-feature percentage
vector, runs a bank of classifiers (obfuscated? which tool? which
techniques?), aggregates verdicts over app corpora into longitudinal
reports, and generates synthetic labeled corpora for training and testing.
"""

__version__ = "0.1.0"
