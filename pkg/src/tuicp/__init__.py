"""Two-sender unicast index coding: instances, confusion graphs, two-sender
colourings, codes and rate reports."""

from .codes import (
    TwoSenderCode,
    code_from_coloring,
    construct_case2e_code,
    slice_bits,
    verify_decodability,
    xor_zero_pad,
)
from .coloring import (
    TwoSenderColoring,
    achievable_case1,
    optimal_two_sender_coloring,
    optimal_two_sender_search,
    validate_coloring,
)
from .config import Caps, RunConfig, load_config
from .confusion import ConfusionGraph, blocks, build, confusable, verify_block_isomorphism
from .errors import (
    ConsistencyError,
    InputError,
    PreconditionError,
    ResourceLimitError,
    TuicpError,
    ValidationError,
)
from .graphs import Digraph, UGraph, chromatic_number, disj_product, lex_product
from .model import (
    CaseLabel,
    InteractionDigraph,
    MessagePartition,
    TuicpInstance,
    classify_case,
    instance_from_json,
    instance_to_json,
    interaction_digraph,
)
from .rates import RateReport, formula_table1, formula_table2, sandwich_check

__version__ = "0.1.0"


__all__ = [
    "TwoSenderCode",
    "code_from_coloring",
    "construct_case2e_code",
    "slice_bits",
    "verify_decodability",
    "xor_zero_pad",
    "TwoSenderColoring",
    "achievable_case1",
    "optimal_two_sender_coloring",
    "optimal_two_sender_search",
    "validate_coloring",
    "Caps",
    "RunConfig",
    "load_config",
    "ConfusionGraph",
    "blocks",
    "build",
    "confusable",
    "verify_block_isomorphism",
    "ConsistencyError",
    "InputError",
    "PreconditionError",
    "ResourceLimitError",
    "TuicpError",
    "ValidationError",
    "Digraph",
    "UGraph",
    "chromatic_number",
    "disj_product",
    "lex_product",
    "CaseLabel",
    "InteractionDigraph",
    "MessagePartition",
    "TuicpInstance",
    "classify_case",
    "instance_from_json",
    "instance_to_json",
    "interaction_digraph",
    "RateReport",
    "formula_table1",
    "formula_table2",
    "sandwich_check",
]
