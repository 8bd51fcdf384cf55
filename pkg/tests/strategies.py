"""Hypothesis strategies for step functions with rational data."""

from fractions import Fraction

from hypothesis import strategies as st

from marclab.stepfn import Piece, StepFunction

values = st.fractions(min_value=-20, max_value=20, max_denominator=8).filter(lambda v: v != 0)


@st.composite
def step_functions(draw, L=Fraction(1), max_pieces=8, positioned=True):
    n = draw(st.integers(1, max_pieces))
    cuts = sorted(set(draw(st.lists(st.integers(1, 63), min_size=n - 1, max_size=n - 1))))
    cuts = [Fraction(0)] + [L * Fraction(c, 64) for c in cuts] + [L * draw(st.sampled_from([Fraction(1), Fraction(3, 4)]))]
    cuts = sorted(set(cuts))
    pieces = []
    for a, b in zip(cuts, cuts[1:]):
        pieces.append(Piece(draw(values), b - a, (a, b) if positioned else None))
    return StepFunction(tuple(pieces), L)


def sample_points(L=Fraction(1)):
    return st.lists(st.integers(1, 256).map(lambda k: L * Fraction(k, 256)), min_size=1, max_size=12)
