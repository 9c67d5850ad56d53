"""Private computation on replicated and systematically encoded data with colluding servers."""

__version__ = "0.1.0"

from .algebra import GF, FieldElement, FieldSpec, Matrix, null_space, rref, solve_linear  # noqa: E402
from .codes import (  # noqa: E402
    LinearCode,
    RSCode,
    min_distance,
    rep_code,
    rs_code,
    star_power,
    star_product,
)
from .polyspace import Polynomial, PolynomialSpace, SpanSpace, evaluate  # noqa: E402
from .privacy_audit import PrivacyReport, audit_all_subsets, mutual_information, otp_check  # noqa: E402
from .scheme_replicated import ReplicatedPCScheme, run_replicated  # noqa: E402
from .scheme_systematic import SystematicPCScheme, build_schedule, rs_rate, run_systematic  # noqa: E402
from .simnet import run_session  # noqa: E402

__all__ = [
    "GF",
    "FieldSpec",
    "FieldElement",
    "Matrix",
    "rref",
    "null_space",
    "solve_linear",
    "LinearCode",
    "RSCode",
    "rep_code",
    "rs_code",
    "star_product",
    "star_power",
    "min_distance",
    "Polynomial",
    "PolynomialSpace",
    "SpanSpace",
    "evaluate",
    "ReplicatedPCScheme",
    "SystematicPCScheme",
    "run_replicated",
    "run_systematic",
    "run_session",
    "build_schedule",
    "rs_rate",
    "PrivacyReport",
    "mutual_information",
    "audit_all_subsets",
    "otp_check",
]
