"""Rank-profile revealing Gaussian elimination over prime fields, in place."""
from .echelon import (
    BUNDLE_KINDS,
    DecompBundle,
    EchelonTransform,
    ReducedEchelonTransform,
    col_ech_trans,
    convert,
    in_place_mm,
    red_col_ech_trans,
)
from .errors import (
    BoundsError,
    DimensionMismatch,
    DivisionByZero,
    MalformedPacked,
    MatrixParseError,
    ModulusOutOfRange,
    NotPrime,
    OverlapError,
    RankOutOfRange,
    RanklabError,
    SingularDiagonal,
    SingularMatrix,
)
from .factor import PackedCup, PackedPle, cup, expand_cup, expand_ple, ple, validate_cup, validate_ple
from .field import OpCounter, PrimeField, ff_new, is_prime
from .kernels import Diag, Left, Lower, NonUnit, Right, Side, Unit, Uplo, Upper, mm, trmm, trsm
from .matrix import (
    Mat,
    MatView,
    Perm,
    format_matrix,
    parse_matrix,
    perm_apply_cols,
    perm_apply_rows,
    read_matrix,
    write_matrix,
)
from .reference import gauss_jordan, naive_gauss, naive_mm, random_matrix, random_rank_matrix
from .solvers import SolveResult, determinant, inverse, nullspace_basis, rank_and_profile, solve
from .tri import DiagOwner, LowerOwnsDiag, PackedTriPair, UpperOwnsDiag, trlum, trtri, trulm

__version__ = "0.1.0"
