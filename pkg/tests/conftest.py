"""Shared fixtures: named data, random generators, hypothesis strategies."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from hblpoly import HblDatum, RationalMatrix, Subspace

settings.register_profile("exact", deadline=None, max_examples=50)
settings.load_profile("exact")


def matmul_datum() -> HblDatum:
    """Three 2-of-3 index projections (the matrix-multiplication pattern)."""
    return HblDatum(
        3,
        (
            RationalMatrix.from_rows([[1, 0, 0], [0, 1, 0]]),
            RationalMatrix.from_rows([[1, 0, 0], [0, 0, 1]]),
            RationalMatrix.from_rows([[0, 1, 0], [0, 0, 1]]),
        ),
    )


def loomis_whitney_datum() -> HblDatum:
    return HblDatum(
        2,
        (
            RationalMatrix.from_rows([[1, 0]]),
            RationalMatrix.from_rows([[0, 1]]),
        ),
    )


def identity_m1_datum(d: int = 1) -> HblDatum:
    return HblDatum(d, (RationalMatrix.identity(d),))


@pytest.fixture
def matmul() -> HblDatum:
    return matmul_datum()


@pytest.fixture
def loomis_whitney() -> HblDatum:
    return loomis_whitney_datum()


def random_datum(rng: random.Random, max_dim: int = 3, max_maps: int = 3, entry_bound: int = 2) -> HblDatum:
    d = rng.randint(1, max_dim)
    m = rng.randint(2, max_maps)
    maps = []
    for _ in range(m):
        dj = rng.randint(1, max_dim)
        maps.append(
            RationalMatrix.from_rows(
                [[rng.randint(-entry_bound, entry_bound) for _ in range(d)] for _ in range(dj)]
            )
        )
    return HblDatum(d, tuple(maps))


def half(*nums) -> tuple[Fraction, ...]:
    return tuple(Fraction(n) for n in nums)


# --- hypothesis strategies ---

small_fractions = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def rational_matrices(draw, max_rows=4, max_cols=4, integral=False):
    rows = draw(st.integers(1, max_rows))
    cols = draw(st.integers(1, max_cols))
    source = st.integers(-4, 4) if integral else small_fractions
    data = draw(
        st.lists(
            st.lists(source, min_size=cols, max_size=cols),
            min_size=rows,
            max_size=rows,
        )
    )
    return RationalMatrix.from_rows(data)


@st.composite
def subspaces(draw, ambient=None, max_ambient=4):
    d = ambient if ambient is not None else draw(st.integers(1, max_ambient))
    count = draw(st.integers(0, d))
    rows = draw(
        st.lists(
            st.lists(st.integers(-3, 3), min_size=d, max_size=d),
            min_size=count,
            max_size=count,
        )
    )
    return Subspace.from_spanning_rows(d, rows)


@st.composite
def subspace_pairs(draw, max_ambient=4):
    d = draw(st.integers(1, max_ambient))
    return draw(subspaces(ambient=d)), draw(subspaces(ambient=d))


@st.composite
def data_with_subspace(draw, max_dim=3, max_maps=3):
    d = draw(st.integers(1, max_dim))
    m = draw(st.integers(1, max_maps))
    maps = []
    for _ in range(m):
        dj = draw(st.integers(1, max_dim))
        rows = draw(
            st.lists(
                st.lists(st.integers(-2, 2), min_size=d, max_size=d),
                min_size=dj,
                max_size=dj,
            )
        )
        maps.append(RationalMatrix.from_rows(rows))
    w = draw(subspaces(ambient=d))
    return HblDatum(d, tuple(maps)), w
