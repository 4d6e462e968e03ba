import os
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from segrejet.coeff import Coeff
from segrejet.series import MultiSeries

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("SEGREJET_EXAMPLES", "40")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)
coeffs = st.builds(Coeff, rationals, rationals)
nonzero_coeffs = coeffs.filter(bool)


@st.composite
def series(draw, arity=2, trunc=4, constant=True, max_terms=6):
    keys = st.lists(st.integers(0, trunc), min_size=arity, max_size=arity).filter(lambda k: sum(k) <= trunc)
    if not constant:
        keys = keys.filter(lambda k: sum(k) > 0)
    terms = draw(st.dictionaries(keys.map(tuple), coeffs, max_size=max_terms))
    return MultiSeries(arity, trunc, terms)


@st.composite
def linear_invertible(draw, k=2, trunc=4):
    """Square map with triangular linear part (always invertible) plus higher terms."""
    out = []
    for i in range(k):
        terms = {}
        for j in range(k):
            e = tuple(1 if t == j else 0 for t in range(k))
            if j == i:
                terms[e] = draw(nonzero_coeffs)
            elif j > i:
                terms[e] = draw(coeffs)
        extra = draw(series(arity=k, trunc=trunc, constant=False))
        terms.update({e: c for e, c in extra if sum(e) >= 2})
        out.append(MultiSeries(k, trunc, terms))
    return out


def frac(x):
    return Fraction(int(x.numerator), int(x.denominator))


def pushed_rho(rho, N, phi):
    """Defining function of phi(M) when M = {rho = 0}; phi is a square map germ in N variables."""
    from segrejet.series import invert_map

    inv = invert_map(list(phi))
    A = 2 * N
    lo = inv.embed(A, list(range(N)))
    hi = inv.conjugate().embed(A, list(range(N, A)))
    return rho.compose(list(lo) + list(hi))


def heisenberg_rho(K=6):
    z, w, zeta, om = (MultiSeries.variable(i, 4, K) for i in range(4))
    return (w - om).scale(Coeff(0, -1) / 2) - z * zeta


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        ok, summary = mod.RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {summary}")
