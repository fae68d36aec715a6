"""Odd order with maximal skewness: alpha = 3, theta = 1.

Here tau = i t is purely imaginary and the Fourier data exp(-i t |xi|**3) do
not decay.  The real part of the solution is an Airy-type profile
(3t)**(-1/3) / 2 [Ai(c x) + Ai(-c x)], c = (3t)**(-1/3), which decays only like
|x|**(-1/4) on one side.  Pointwise evaluation handles it; a periodic FFT grid
does not, because the lattice cannot resolve the phase of the data and the
periodised profile does not converge.
"""
import numpy as np

from fracdirac.solution import (airy_closed_form, airy_reference_check, oscillatory_oracle,
                                solution_field_spectral, solution_pointwise, validate_params)
from fracdirac.spectral import GridSpec

if __name__ == "__main__":
    s = validate_params(3.0, 1.0)
    print(f"{'x':>6} {'pointwise':>22} {'Airy form':>22} {'rotated-ray oracle':>22}")
    for x in (-5.0, -2.0, 0.0, 1.0, 3.0):
        v = solution_pointwise(s, 1, abs(x), 1.0).real_part
        print(f"{x:6.1f} {v:22.15e} {float(airy_closed_form(x)):22.15e} "
              f"{oscillatory_oracle(3.0, x, 1.0, 1).real:22.15e}")
    rep = airy_reference_check(1, GridSpec(1, 256, 20.0), 1.0, 1)
    print("reference check:", rep.to_dict())

    grid = GridSpec(1, 1024, 20.0)
    xi_max = np.pi * grid.points / (2 * grid.half_width)
    step = 3 * xi_max ** 2 * np.pi / grid.half_width
    print(f"phase change of the data between neighbouring lattice modes at the band edge: {step:.0f} rad")
    fft_val = solution_field_spectral(s, grid, 1.0).scalar[grid.points // 2].real
    print("FFT path at x = 0:", fft_val, "pointwise:", solution_pointwise(s, 1, 0.0, 1.0).real_part)
