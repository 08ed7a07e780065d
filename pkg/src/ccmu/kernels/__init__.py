"""Hot kernels for the enumeration sweeps: packed model families, a
vectorized formula evaluator and refinement/marking sweeps, each with a
numba path and a pure-numpy fallback selected by CCMU_BACKEND."""

from .backend import HAS_NUMBA, USE_NUMBA, backend_name, use_numba
from .packed import (
    MAX_DENSE_BITS,
    PackedFamily,
    PackedModel,
    family_block,
    full_family,
    model_bits,
    model_count,
    model_from_index,
    model_to_index,
    pack_model,
    pointed_from_index,
    state_names,
)
from .evalform import Program, compile_formula, eval_family, sat_roots
from .refine import or_reduce_where, refines_family
