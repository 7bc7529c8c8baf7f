"""Belief revision and view update for Horn knowledge bases."""

from .abduction import (
    ExplanationFamily,
    ExplanationSet,
    NoExplanationError,
    build_sld_tree,
    locally_minimal_explanations,
    minimal_explanations,
)
from .change import (
    ChangeStrategy,
    kernel_revision,
    kernels,
    minimal_hitting_sets,
    partial_meet_revision,
    remainders,
    strategy,
)
from .core import (
    Atom,
    HkbError,
    HornClause,
    KnowledgeBase,
    Literal,
    UnknownPredicateError,
    atom,
    denial,
    fact,
)
from .magic import magic_vu, normalize
from .parser import ParseError, load, parse_atom, parse_clause, parse_program, serialize
from .revision import RevisionOutcome, all_minimal_revisions, generalized_revision
from .semantics import entails, least_herbrand_model, violated_constraints
from .tableau import hyper_tableau, transform_idb_bullet, transform_idb_star, transform_materialized
from .viewupdate import ImpossibleUpdateError, UpdateTransaction, apply_transaction, check_transaction, view_update

__version__ = "0.1.0"
