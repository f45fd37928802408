from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from exint.scalar import Scalar, is_half_integer_pole

settings.register_profile("exint", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("exint")

small_fractions = st.fractions(min_value=-9, max_value=9, max_denominator=9)
gaussian = st.builds(Scalar, small_fractions, small_fractions)
real = st.builds(Scalar, small_fractions)
nonzero_real = real.filter(lambda s: not s.is_zero())
non_pole = real.filter(lambda s: not is_half_integer_pole(s))


def half(x):
    return x * Fraction(1, 2)
