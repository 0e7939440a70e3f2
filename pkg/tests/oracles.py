"""Frozen reference values computed by hand or with mpmath, independent of the package."""

from fractions import Fraction as F

# K0 = gamma(gamma+2)(gamma+4)(n-2-gamma)(n-4-gamma)(n-6-gamma), gamma = 6/(p-1)
K0_PRODUCT = {
    (9, F(4)): F(720),              # gamma = 2: 2*4*6*5*3*1
    (7, F(8)): F(1774800, 117649),  # gamma = 6/7
    (10, F(4)): F(2304),            # gamma = 2: 2*4*6*6*4*2
    (12, F(3)): F(11025),           # gamma = 3: 3*5*7*7*5*3
}

# lower-critical log-corrected constants, n -> K0_hat(n)
K0_HAT = {7: F(20), 9: F(420), 10: F(1024), 12: F(3840)}

# 720^(1/3) and -(3/10) 720^(5/3), both to 15 significant digits
V_STAR_9_4 = 8.96280949311433
LEVEL_9_4 = -17351.7020661298

def symbol_coefficients(n, p):
    """K0..K5 of prod (lambda - root) over the six gamma-shifted roots."""
    g = F(6) / (p - 1)
    coeffs = [F(1)]  # ascending, built by multiplying linear factors
    for r in (g, g + 2, g + 4, g + 6 - n, g + 4 - n, g + 2 - n):
        nxt = [F(0)] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k + 1] += c
            nxt[k] -= r * c
        coeffs = nxt
    return tuple(coeffs[:6])


def indicial(a, n):
    """r^6 Delta^3 r^a / r^a for the radial tri-Laplacian in dimension n."""
    return a * (a + n - 2) * (a - 2) * (a + n - 4) * (a - 4) * (a + n - 6)


# printed K3 at n = 9, p = 4 (the derived value is +87)
PRINTED_K3_9_4 = F(-87)
