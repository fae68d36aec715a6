"""Three independent ways to evaluate the radial kernel K_{alpha,n}(r, tau).

The kernel is the inverse Fourier transform of exp(-tau |xi|**alpha).  It can
be summed as a Wright series, integrated radially against a Bessel function,
or written as a Mellin-Barnes contour integral.  The routes share nothing
beyond the Gamma function, so their agreement is a strong check.
"""
import cmath
import math

from fracdirac.kernel import (KernelQuery, heat_kernel, kernel_mellin_barnes, kernel_quadrature,
                              kernel_wright)


def table(alpha, n, tau, radii):
    print(f"alpha = {alpha}, n = {n}, tau = {tau:.3f}")
    print(f"{'r':>6} {'wright':>24} {'quadrature':>24} {'mellin':>24}")
    for r in radii:
        q = KernelQuery(alpha, n, r, tau)
        w, qd, mb = kernel_wright(q), kernel_quadrature(q), kernel_mellin_barnes(q)
        print(f"{r:6.2f} {w.real:24.16e} {qd.real:24.16e} {mb.real:24.16e}")
    print()


if __name__ == "__main__":
    # alpha = 2 is the Gaussian heat kernel, a closed-form anchor
    q = KernelQuery(2.0, 3, 1.5, 1.0)
    print("heat kernel n=3, r=1.5:", kernel_wright(q).real, "closed form:", heat_kernel(3, 1.5, 1.0))
    print()
    table(3.0, 1, 1.0, (0.25, 1.0, 4.0))
    # a rotated time parameter makes the kernel complex and the series terms oscillate
    table(2.5, 2, cmath.exp(0.25j * math.pi), (0.5, 2.0, 8.0))

    # at larger radii the Wright terms grow to e**30 before cancelling; the series
    # switches to extended precision automatically and reports what it used
    v, info = kernel_wright(KernelQuery(2.5, 1, 20.0, cmath.exp(0.25j * math.pi)), full_output=True)
    print("r = 20:", v, info)
