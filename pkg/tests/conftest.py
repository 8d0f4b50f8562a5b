import sys
from fractions import Fraction
from pathlib import Path

from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)
small_ints = st.integers(min_value=-4, max_value=4)


@st.composite
def polys(draw, ring, max_degree=16, coeffs=small_fractions, homogeneous=False):
    """Random element of ``ring`` spanned by normal monomials of degree <= max_degree."""
    degrees = [d for d in range(max_degree + 1) if ring.normal_monomials(d)]
    if homogeneous:
        degrees = [draw(st.sampled_from(degrees))]
    out = ring.zero()
    for d in degrees:
        for e in ring.normal_monomials(d):
            c = draw(coeffs)
            if c:
                out = out + ring.monomial(e, c)
    return out
