"""Linear and symplectic algebra over Colombeau generalized numbers.

Scalars are eps-indexed nets sampled on a finite grid; every equality or
invertibility decision goes through the asymptotic classifier.
"""

from .asymptotics import AsymptoticReport, Classification, all_negligible, classify, is_negligible
from .config import DEFAULT_CONFIG, ClassifierConfig, load_config
from .errors import (
    GNAError,
    InputError,
    MathError,
    NonInvertibleScalarError,
    ParseError,
    EvaluationError,
    PostconditionError,
    PreconditionError,
    SingularMatrixError,
    StructuralError,
    SymmetryError,
    InvalidFormError,
    UnsupportedError,
)
from .grid import DEFAULT_GRID, EpsGrid, grid_from_descriptor, make_grid
from .kernels import BACKEND
from .linalg import (
    GenMatrix,
    GenVector,
    det,
    extend_to_basis,
    inverse,
    is_free,
    is_free_set,
    is_invertible,
    kernel_free_vector,
    solve,
)
from .netexpr import evaluate, parse, pretty
from .scalar import (
    GenScalar,
    Idempotent,
    interleave,
    invert,
    random_partition,
    scalar_arith,
    zero_divisor_split,
)
from .spectra import (
    EigenTuple,
    SkewNormalForm,
    char_poly_roots_distinguished,
    eigenpair_from_root,
    hermitian_eigentuple,
    hermitize,
    is_eigenvalue,
    representative_stability_check,
    skew_eigentuple,
    skew_normal_form,
    skew_symmetrize,
    skew_to_standard_J,
)
from .symplectic import (
    Submodule,
    SubmoduleType,
    SymplecticBasis,
    SymplecticForm,
    annihilator,
    classify_submodule,
    extend_symplectic_basis,
    is_symplectic_matrix,
    lagrangian_standard_form,
    standard_form,
    symplectic_basis,
    symplectomorphism_to_standard,
)

__version__ = "0.1.0"
