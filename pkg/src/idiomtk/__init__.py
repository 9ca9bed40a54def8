"""Idiomaticity classification toolkit for multi-word expressions in context.

Classifies an MWE occurrence as idiomatic or literal by translating it in
context, word-aligning the translation, and checking whether each content
word shares a multilingual synonym set with its translation.  Also provides
the type-based attestation heuristic, method combination, gloss-augmented
classifier input export, and a macro-F1 evaluation harness.
"""

__version__ = "0.1.0"
