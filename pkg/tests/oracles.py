"""Reference computations that share no code with the package."""
import cmath
import math
from decimal import Decimal, localcontext


def j0_series(x, digits=80):
    """Power series sum (-1)^m (x/2)^{2m} / (m!)^2 evaluated in Decimal."""
    with localcontext() as ctx:
        ctx.prec = digits
        q = (Decimal(repr(float(x))) / 2) ** 2
        term = total = Decimal(1)
        m = 0
        while True:
            m += 1
            term = -term * q / (m * m)
            total += term
            if m > float(q) and abs(term) < Decimal(10) ** (5 - digits):
                return float(total)


def array_factor_direct(theta, n, spacing, theta_b):
    """|sum_i exp(j k d (sin theta_B - sin theta) i)| / sqrt(N), term by term."""
    psi = 2 * math.pi * spacing * (math.sin(theta_b) - math.sin(theta))
    return abs(sum(cmath.exp(1j * psi * i) for i in range(n))) / math.sqrt(n)


def c0_default():
    return 10 ** 1.5 / (2 ** (3.4594 - 1) - 1)
