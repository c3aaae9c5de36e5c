"""Seeded generation of quadratic maps with the invariant line z1 = 0."""

import random

from quadspec.errors import (
    DegenerateMap,
    NonSimpleLineFixedPoint,
    PreconditionError,
    QuadspecError,
    TowerTooDeep,
)
from quadspec.poly import MPoly
from quadspec.projmap import (
    AffineNormalForm,
    LineP2,
    QuadraticMapP2,
    normal_form_to_map,
    spectrum,
)
from quadspec.scalars import rat

X, Y = MPoly.gens(("x", "y"))
LINE_Z1 = LineP2((rat(1), rat(0), rat(0)))


def normal_form_from_params(ws):
    """Build the normal form with P, Q vanishing at (0,0), (1,0), (0,1)."""
    w1, w2, w3, w4, w5, w6, w7, w8 = (rat(w) for w in ws)
    p = w1 * (X * X - X) + w2 * X * Y + w3 * (Y * Y - Y)
    q = w4 * (X * X - X) + w5 * X * Y + w6 * (Y * Y - Y)
    l = 1 + w7 * X + w8 * Y
    return AffineNormalForm(L=l, P=p, Q=q, p4=(rat(0), rat(0)))


def random_spectra(seed: int, count: int, span: int = 5):
    """Yield (map, SpectrumRecord) pairs for seeded random parameter picks.

    Skips parameter choices that are degenerate or fail the simplicity
    preconditions; keeps drawing until `count` spectra are produced.
    """
    rng = random.Random(seed)
    produced = 0
    while produced < count:
        ws = [rng.randint(-span, span) for _ in range(8)]
        try:
            f = normal_form_to_map(normal_form_from_params(ws))
            f.validate()
            sp = spectrum(f, LINE_Z1)
        except (
            DegenerateMap,
            NonSimpleLineFixedPoint,
            PreconditionError,
            TowerTooDeep,
            QuadspecError,
        ):
            continue
        yield f, sp
        produced += 1
