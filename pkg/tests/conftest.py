from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from confalg.diffring import RingSpec
from confalg.scalars import Scalar

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SPECS = [RingSpec.const(), RingSpec.laurent(), RingSpec.trunc(4), RingSpec.puiseux(2)]

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
scalars = st.builds(Scalar, rationals, rationals)
nonzero_scalars = scalars.filter(bool)


@st.composite
def ring_elements(draw, spec: RingSpec, max_terms: int = 3):
    if spec.kind == "const":
        return spec.scalar(draw(scalars))
    if spec.kind == "trunc":
        exps = st.integers(0, spec.param - 1).map(Fraction)
    else:
        D = spec.denominator
        exps = st.integers(-3 * D, 3 * D).map(lambda k: Fraction(k, D))
    r = spec.zero()
    for c, q in draw(st.lists(st.tuples(scalars, exps), max_size=max_terms)):
        r = r + spec.monomial(c, q)
    return r


specs = st.sampled_from(SPECS)


# acceptance criteria record one line each; printed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
