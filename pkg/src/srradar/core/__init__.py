from .indexing import (
    length,
    n_half_from_length,
    sym_indices,
    sym_fft,
    sym_ifft,
    sym_fft2,
    sym_ifft2,
    reduce_mod1,
    wrap_distance,
    wrap_difference
)
from .kernels import dirichlet, dirichlet_trunc
from .signal import ProbingSignal
from .shifts import time_shift, freq_shift, tf_shift, tf_shift_columns
from .atoms import TFShift, Atom, atom
from .operators import (
    gabor_apply,
    gabor_adjoint,
    gabor_matrix,
    DictionaryOperator,
    dictionary_operator,
    dict_apply,
    dict_adjoint,
    dictionary_matrix
)
from .trig_poly import (
    TrigPoly2D,
    eval_trigpoly_grid,
    trigpoly_eval,
    inner_product_poly,
    squared_magnitude_derivatives
)
