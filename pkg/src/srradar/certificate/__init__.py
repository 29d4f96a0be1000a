from .fejer import FejerSq, fejer_sq_coeffs
from .kernels import gbar, gbar_poly, kernel_coeffs, interp_vector, random_kernel, g_random
from .system import InterpSystem, CertCoeffs, build_interp_system, solve_cert_coeffs
from .certificate import Certificate, CertificateReport, build_certificate, validate_certificate
from .studies import (
    CertificateStudy,
    GramStudy,
    KernelStudy,
    random_signs,
    certificate_trial,
    certificate_study,
    gabor_gram_study,
    kernel_study
)
