"""
Interpolation kernels.

The deterministic kernel is ``Gbar(r) = F(tau) F(nu)`` with ``F`` the squared Fejer kernel. Its random counterparts

    G_{(m', n')}(r, r_j) = (L^2 / M^2) <G F^H g_{(m', n')}(r_j), F_nu T_tau x>

are dual polynomials of the vectors ``w = G F^H g_{(m', n')}(r_j)``, with
``[g_{(m', n')}(r_j)]_{(a, b)} = g_a g_b e^{-i 2 pi (tau_j a + nu_j b)} (i 2 pi a)^{m'} (i 2 pi b)^{n'}``. Since
``E[G^H G] = I``, ``E[G^{(m, n)}_{(m', n')}(r, r_j)] = Gbar^{(m + m', n + n')}(r - r_j)``.
"""
import numpy as np

from src.srradar.certificate.fejer import fejer_sq_coeffs
from src.srradar.core.atoms import TFShift
from src.srradar.core.indexing import sym_ifft2, sym_indices
from src.srradar.core.operators import gabor_apply
from src.srradar.core.trig_poly import TrigPoly2D, inner_product_poly
from src.srradar.errors import DimensionError

MAX_ORDER = 4


def _check_order(*orders):
    if min(orders) < 0 or sum(orders) > MAX_ORDER:
        raise DimensionError(f'Derivative orders {orders} must be non-negative with total at most {MAX_ORDER}.')


def _as_point(r):
    if isinstance(r, TFShift):
        return r.tau, r.nu
    tau, nu = r
    return tau, nu


def gbar(r, m=0, n=0, n_half=None):
    """
    ``d^m/dtau^m d^n/dnu^n F(tau) F(nu)`` at ``r = (tau, nu)``.

    Parameters
    ----------
    r : TFShift or (tau, nu)
        ``tau`` and ``nu`` may be broadcastable arrays.

    m, n : int
        Derivative orders, ``m + n <= 4``.

    n_half : int
        Even kernel degree N.

    """
    _check_order(m, n)
    fejer = fejer_sq_coeffs(n_half)
    tau, nu = _as_point(r)
    return fejer(tau, m) * fejer(nu, n)


def kernel_coeffs(fejer, r_j, m=0, n=0):
    """
    ``g_{(m, n)}(r_j)`` as an ``L x L`` array indexed ``(a + N, b + N)``.
    """
    tau, nu = _as_point(r_j)
    a = sym_indices(fejer.n_half)
    g_tau = fejer.coeffs * np.exp(-2j * np.pi * tau * a) * (2j * np.pi * a) ** m
    g_nu = fejer.coeffs * np.exp(-2j * np.pi * nu * a) * (2j * np.pi * a) ** n
    return np.outer(g_tau, g_nu)


def gbar_poly(r_j, m=0, n=0, n_half=None):
    """
    ``Gbar^{(m, n)}(r - r_j)`` as a :class:`TrigPoly2D` in ``r``.
    """
    _check_order(m, n)
    fejer = fejer_sq_coeffs(n_half)
    return TrigPoly2D(kernel_coeffs(fejer, r_j, m, n)[::-1, ::-1] / fejer.m_param ** 2)


def interp_vector(x, r_j, m=0, n=0):
    """
    ``w = G F^H g_{(m, n)}(r_j)``, a length-L vector.

    ``F^H`` pairs the frequency index of the Gabor coefficients with the second kernel index, so the coefficients
    fed to :func:`gabor_apply` are the symmetric inverse 2D DFT of the transposed kernel array.
    """
    _check_order(m, n)
    fejer = fejer_sq_coeffs(x.n_half)
    return gabor_apply(x, sym_ifft2(kernel_coeffs(fejer, r_j, m, n).T))


def random_kernel(x, r_j, m=0, n=0):
    """
    ``G_{(m, n)}(r, r_j)`` as a :class:`TrigPoly2D` in ``r``.
    """
    M = fejer_sq_coeffs(x.n_half).m_param
    return (x.L ** 2 / M ** 2) * inner_product_poly(x, interp_vector(x, r_j, m, n))


def g_random(x, r, r_j, mp=0, np_=0, m=0, n=0):
    """
    ``G^{(m, n)}_{(m', n')}(r, r_j)``: the ``(m, n)`` derivative in ``r`` of the random kernel ``(m', n')``.
    """
    _check_order(m, n, mp, np_)
    tau, nu = _as_point(r)
    return random_kernel(x, r_j, mp, np_)(tau, nu, m=m, n=n)
