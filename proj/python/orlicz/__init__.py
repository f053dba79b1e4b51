"""Orlicz sequence-space norms, twisted sums and star-iterated renormings."""

from ._core import (
    CertificateFailure,
    NumericFailure,
    OrliczFn,
    Pipeline,
    SchemaError,
    TwistedSpace,
    certify,
    equivalence_certificate,
    extend,
    kp_F,
    luxemburg_norm,
    quasiconvexity_constant,
    run_cli,
    s_functional,
    t2_pipeline,
    twisted_norm,
)

__all__ = [
    "CertificateFailure",
    "NumericFailure",
    "OrliczFn",
    "Pipeline",
    "SchemaError",
    "TwistedSpace",
    "certify",
    "equivalence_certificate",
    "extend",
    "kp_F",
    "luxemburg_norm",
    "quasiconvexity_constant",
    "run_cli",
    "s_functional",
    "t2_pipeline",
    "twisted_norm",
]
