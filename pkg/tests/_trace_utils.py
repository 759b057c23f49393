"""Shared test helper: truncated continuum resolvent traces.

Builds sum over k in Z^2, k != 0 of (|k|^2 + z^2)^(-beta) from a max-norm
truncated lattice sum plus the continuum integral over the exterior of the
truncation square and its leading Euler-Maclaurin flux correction; beyond
z = 6 the two-term Poisson asymptotic pi/(beta-1) z^(2-2beta) - z^(-2beta)
is exact to e^(-2 pi z) and is used instead.
"""

import math

import numpy as np

from toruszeta.quadrature import _gl_rule
from toruszeta.special import complex_gamma

_X32, _W32 = _gl_rule(32)
Z_SWITCH = 6.0


def make_truncated_trace(beta: int, cutoff: int):
    k = np.arange(-cutoff, cutoff + 1)
    q = (k[:, None] ** 2 + k[None, :] ** 2).astype(float).ravel()
    q = q[q > 0]
    bde = cutoff + 0.5
    cb = math.sqrt(math.pi) * complex_gamma(beta - 0.5).real \
        / complex_gamma(beta).real
    xv = bde / _X32
    wv = bde * _W32 / _X32 ** 2
    vv, ww = np.meshgrid(_X32, _X32, indexing="ij")
    cw = np.outer(_W32, _W32).ravel()
    v2w2 = (vv ** 2 + ww ** 2).ravel()
    vw = (vv * ww).ravel()
    pow_fac = (vv ** 2 * ww ** 2).ravel() ** (beta - 1.0)
    yv = bde * _X32
    yw = bde * _W32

    def trace(z):
        z = np.atleast_1d(np.asarray(z, dtype=float))
        out = np.empty(z.shape)
        near = z <= Z_SWITCH
        if np.any(near):
            zz = (z[near] * z[near])[:, None]
            main = ((q[None, :] + zz) ** -float(beta)).sum(axis=1)
            strip = cb * ((((xv ** 2)[None, :] + zz) ** (0.5 - beta)) @ wv)
            corner = (pow_fac[None, :]
                      * (v2w2[None, :] + (vw[None, :] ** 2) * zz / bde ** 2)
                      ** -float(beta)) @ cw * bde ** (2 - 2 * beta)
            side = 2.0 * (((bde * bde + (yv ** 2)[None, :] + zz)
                           ** (-beta - 1.0)) @ yw)
            out[near] = main + 4.0 * strip - 4.0 * corner \
                - 8.0 * beta * bde * side / 24.0
        if np.any(~near):
            zf = z[~near]
            out[~near] = math.pi / (beta - 1) * zf ** (2 - 2 * beta) \
                - zf ** (-2.0 * beta)
        return out

    return trace
