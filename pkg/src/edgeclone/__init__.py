"""Clone computations on finite sets: embedding order, phi/lambda encodings,
Pol/Inv checks and pp-definitions of subgroups."""

from .clone import (
    CloneLayer,
    clone_layer,
    compute_m,
    find_edge,
    find_malcev,
    find_nu,
    is_edge_op,
    is_malcev,
    is_nu,
    is_term_function,
    lambda_member,
    layer_as_relation,
    phi,
)
from .config import Config, ContractError, DomainError, EdgeCloneError, ResourceLimitError
from .core import (
    Algebra,
    Domain,
    OperationTable,
    Relation,
    apply,
    compose,
    decode_tuple,
    encode_tuple,
    projection,
    subpower_closure,
)
from .galois import (
    SubpowerFamily,
    combine_relations,
    fork,
    pol_layer,
    preserves,
    proj_T,
    rep_check,
    subuniverses,
    verify_determination,
)
from .ppgroup import GroupTable, PPFormula, build_pp_formula, eval_pp_formula, select_M, small_generators
from .words import embeds, find_good_pair, first_occ, minimal_elements, predecessors, t_map, word_le

__version__ = "0.1.0"
