"""Littlewood-Schur functions, partition overlaps, and unitary-group averages."""

from . import haar, overlap_identities, partitions, rmt, schur_algebra, symfunc, verify

__all__ = [
    "haar",
    "overlap_identities",
    "partitions",
    "rmt",
    "schur_algebra",
    "symfunc",
    "verify",
]
