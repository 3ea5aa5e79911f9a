"""Sorting under partial information with separate preprocessing and query phases."""

from .poset import (
    LinearOracle,
    PartialOracle,
    PosetInstance,
    chain_union_entropy,
    count_linear_extensions,
    log_extensions_chain_union,
    verify_extension,
)
from .sorter import PreprocessedIndex, SortResult, preprocess, query_sort, sort_instance

__version__ = "0.1.0"

__all__ = [
    "LinearOracle",
    "PartialOracle",
    "PosetInstance",
    "PreprocessedIndex",
    "SortResult",
    "chain_union_entropy",
    "count_linear_extensions",
    "log_extensions_chain_union",
    "preprocess",
    "query_sort",
    "sort_instance",
    "verify_extension",
]
