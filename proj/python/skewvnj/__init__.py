"""Skew generalized Von Neumann-Jordan type constants of planar normed spaces."""

from ._core import *  # noqa: F401,F403
from ._core import (
    AuditParams,
    ConstantKind,
    Query,
    SearchConfig,
    Space,
    bm_upper_bound,
    estimate_constant,
    reproduce_paper,
    run_full_audit,
    standard_corpus,
)

__all__ = [
    "AuditParams",
    "ConstantKind",
    "Query",
    "SearchConfig",
    "Space",
    "bm_upper_bound",
    "estimate_constant",
    "reproduce_paper",
    "run_full_audit",
    "standard_corpus",
]
