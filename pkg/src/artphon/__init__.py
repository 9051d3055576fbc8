"""Phoneme recognition toolkit for scoring articulatory speech synthesis.

Trains a CTC phoneme recognizer on vocal-tract contour features (optionally
with a categorical voicing side input), then scores synthetic articulations
by phoneme error rate, class-grouped confusion matrices, and embedding-space
structure.
"""

__version__ = "0.1.0"

from artphon.vocabulary import Vocabulary, PhoneticClassMap, build_vocabulary

__all__ = ["Vocabulary", "PhoneticClassMap", "build_vocabulary", "__version__"]
