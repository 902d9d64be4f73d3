from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from galorb.catalog import canonical_row
from galorb.linalg import InnerProductSpace, Mat
from galorb.sampling import Sampler
from galorb.summands import Kind, SummandShape

settings.register_profile(
    "exact",
    deadline=None,
    max_examples=40,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("exact")

TILDE_GRAMS = {
    "I1": Mat.identity(1),
    "I2": Mat.identity(2),
    "I3": Mat.identity(3),
    "diag(1,-1)": Mat.diag([1, -1]),
    "diag(1,1,-1)": Mat.diag([1, 1, -1]),
}

seeds = st.integers(min_value=0, max_value=2**32 - 1)
gram_names = st.sampled_from(sorted(TILDE_GRAMS))
small_fractions = st.fractions(min_value=-4, max_value=4, max_denominator=3)


def full_space(n_or_name) -> InnerProductSpace:
    if isinstance(n_or_name, str):
        return InnerProductSpace.full(TILDE_GRAMS[n_or_name])
    return InnerProductSpace.full(Mat.identity(n_or_name))


def sampler(seed: int, bound: int = 3) -> Sampler:
    return Sampler.seeded(seed, bound=bound)


def matrices(rows: int, cols: int):
    return st.lists(st.lists(small_fractions, min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(
        lambda r: Mat(r, cols=cols)
    )


def col(*values) -> Mat:
    return Mat.column([Fraction(v) for v in values])


@pytest.fixture
def space1() -> InnerProductSpace:
    return full_space(1)


@pytest.fixture
def space3() -> InnerProductSpace:
    return full_space(3)


CODES = {
    "N3": (Kind.COTYPE_AFFINE_NABLA3, 3, 1),
    "Ny": (Kind.COTYPE_NABLA2_Y1, 2, 0),
    "N2": (Kind.COTYPE_AFFINE_NABLA2, 2, 1),
    "N0-": (Kind.COTYPE_NONAFFINE_EPS, 1, 1),
    "N0+": (Kind.COTYPE_NONAFFINE_EPS, 1, 0),
    "D2-": (Kind.TYPE_DELTA2_MINUS_0, 3, 1),
    "RP": (Kind.TYPE_DELTA0_RP, 2, 1),
    "IP": (Kind.TYPE_DELTA0_IP, 2, 0),
    "D+": (Kind.TYPE_DELTA0_SIGN0, 1, 0),
    "D-": (Kind.TYPE_DELTA0_SIGN0, 1, 1),
}

# The n = 3 orbit table, row by row as printed.
PRINTED_ROWS = [
    "N3 IP", "N3 D+ D+", "Ny D2-", "Ny RP D+", "Ny IP D-", "N2 IP D+", "N2 D+ D+ D+", "Ny D- D+ D+",
    "N0- IP D+ D+", "N0- D+ D+ D+ D+", "N0+ D2- D+", "N0+ RP IP", "N0+ RP D+ D+", "N0+ IP D- D+",
    "N0+ D- D+ D+ D+",
]
EXTRA_ROW = "N0- IP IP"
UNREALIZABLE = {9, 10, 12, 13}


def row(codes: str):
    return canonical_row(SummandShape(*CODES[c]) for c in codes.split())
