"""Chart-level log geometry and exact cohomology of thickened lines over F_q."""

from .charts import (
    ChartTriple,
    ChartVerdict,
    build_kummer_cover,
    check_log_smooth_chart,
    stalk_sharp_pushout,
    verify_strictness_criterion,
    verify_torsor_selfproduct,
)
from .cohomology import (
    CohomologySpace,
    CurveParams,
    SemilinearOperator,
    cech_h1_thickened,
    fixed_classes,
    frobenius_operator,
    monomial_h1_basis,
    semilinear_kernel_dim,
    torus_action,
)
from .errors import NilpotencyError, PreconditionError, ResourceCapError
from .hopf import FiniteGroupSchemeTag, hom_group_schemes
from .kummer import LogUnitClass, mu_p_decomposition_check, pth_power_test, r1_sections, surjectivity_certificate
from .lattice import AbelianGroup
from .monoid import (
    AffineMonoid,
    MonoidMap,
    groupify,
    is_kummer,
    monoid_isomorphic,
    pushout_fs,
    root_monoid,
    saturate,
    sharpen,
)
from .picard import picard_p_torsion
from .suites import SuiteConfig, VerificationReport, run_suite
from .textformat import MonoidSemanticError, MonoidSyntaxError, parse_monoid_file, serialize
from .truncated import GroupRingScalar, TruncatedRingElement, truncated_exp, truncated_log

__all__ = [
    "AbelianGroup",
    "AffineMonoid",
    "ChartTriple",
    "ChartVerdict",
    "CohomologySpace",
    "CurveParams",
    "FiniteGroupSchemeTag",
    "GroupRingScalar",
    "LogUnitClass",
    "MonoidMap",
    "MonoidSemanticError",
    "MonoidSyntaxError",
    "NilpotencyError",
    "PreconditionError",
    "ResourceCapError",
    "SemilinearOperator",
    "SuiteConfig",
    "TruncatedRingElement",
    "VerificationReport",
    "build_kummer_cover",
    "cech_h1_thickened",
    "check_log_smooth_chart",
    "fixed_classes",
    "frobenius_operator",
    "groupify",
    "hom_group_schemes",
    "is_kummer",
    "monoid_isomorphic",
    "monomial_h1_basis",
    "mu_p_decomposition_check",
    "parse_monoid_file",
    "picard_p_torsion",
    "pth_power_test",
    "pushout_fs",
    "r1_sections",
    "root_monoid",
    "run_suite",
    "saturate",
    "semilinear_kernel_dim",
    "serialize",
    "sharpen",
    "stalk_sharp_pushout",
    "surjectivity_certificate",
    "torus_action",
    "truncated_exp",
    "truncated_log",
    "verify_strictness_criterion",
    "verify_torsor_selfproduct",
]

__version__ = "0.1.0"
