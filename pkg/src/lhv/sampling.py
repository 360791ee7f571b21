"""Seeded random draws of scalars, polynomials, elements, and parameters.

Everything takes an explicit ``random.Random`` so suite reports are
reproducible from their recorded seed.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import AlgebraElement, TruncationBox
from .autos import AutomorphismParams
from .derivations import (
    CoefficientDerivation,
    HScalingDerivation,
    InnerDerivation,
    LToHDerivation,
    ScalingDerivation,
    SumDerivation,
)
from .gamma import Character, GammaConfig, GammaHom, GSymbol, scaling_group_contains
from .laurent import LaurentPoly, RhoOperator
from .scalars import QuadraticField, Quad
from .errors import ZeroScalar


def random_fraction(rng, span: int = 6, den: int = 4, nonzero: bool = False) -> Fraction:
    while True:
        value = Fraction(rng.randint(-span, span), rng.randint(1, den))
        if value or not nonzero:
            return value


def random_scalar(rng, field, nonzero: bool = False):
    if isinstance(field, QuadraticField):
        while True:
            value = Quad(random_fraction(rng), random_fraction(rng), field.d)
            if value or not nonzero:
                return value
    return random_fraction(rng, nonzero=nonzero)


def random_laurent(
    rng, field, window=(-2, 2), max_terms: int = 2, nonzero: bool = False
) -> LaurentPoly:
    while True:
        coeffs = {}
        for _ in range(rng.randint(0 if not nonzero else 1, max_terms)):
            coeffs[rng.randint(*window)] = random_scalar(rng, field)
        poly = LaurentPoly(coeffs)
        if poly or not nonzero:
            return poly


def random_element(
    rng,
    cfg: GammaConfig,
    box: TruncationBox,
    max_terms: int = 3,
    kinds=("L", "H"),
    gamma_filter=None,
    nonzero: bool = False,
) -> AlgebraElement:
    gammas = box.gamma_values()
    if gamma_filter is not None:
        gammas = [g for g in gammas if gamma_filter(g)]
    while True:
        out = AlgebraElement.zero(cfg)
        for _ in range(rng.randint(1, max_terms)):
            kind = rng.choice(kinds)
            g = rng.choice(gammas)
            i = rng.choice(list(box.t_values()))
            c = random_scalar(rng, cfg.field)
            out = out + AlgebraElement.basis_element(cfg, kind, g, i).scaled(c)
        if out or not nonzero:
            return out


def random_hom_laurent(rng, cfg: GammaConfig, window=(-2, 2)) -> GammaHom:
    return GammaHom(tuple(random_laurent(rng, cfg.field, window) for _ in range(cfg.rank)))


def random_hom_int(rng, cfg: GammaConfig, span: int = 2) -> GammaHom:
    return GammaHom(tuple(rng.randint(-span, span) for _ in range(cfg.rank)))


def random_character(rng, cfg: GammaConfig) -> Character:
    return Character(
        tuple(random_scalar(rng, cfg.field, nonzero=True) for _ in range(cfg.rank))
    )


def random_gsymbol(rng, cfg: GammaConfig, window=(-2, 2)) -> GSymbol:
    return GSymbol(
        cfg,
        random_laurent(rng, cfg.field, window),
        random_laurent(rng, cfg.field, window),
    )


def random_rho(rng, field, window=(-2, 2)) -> RhoOperator:
    return RhoOperator(random_laurent(rng, field, window))


def family_windows(box: TruncationBox):
    """Laurent-degree windows keeping family images inside the padded box.

    Scaling parameters multiply ``t**i`` directly, the coefficient-ring
    part lands at degree ``m + i - 1``, hence the shift.
    """
    pad = box.pad
    return (-pad, pad), (-pad + 1, pad + 1)


def random_family_sum(rng, cfg: GammaConfig, window=(-2, 2), rho_window=None):
    """A random four-family tuple and its sum derivation."""
    if rho_window is None:
        rho_window = (window[0] + 1, window[1] + 1)
    hom = random_hom_laurent(rng, cfg, window)
    sym = random_gsymbol(rng, cfg, window)
    h_scale = random_laurent(rng, cfg.field, window)
    rho = random_rho(rng, cfg.field, rho_window)
    total = SumDerivation(
        cfg,
        [
            ScalingDerivation(cfg, hom),
            LToHDerivation(sym),
            HScalingDerivation(cfg, h_scale),
            CoefficientDerivation(cfg, rho),
        ],
    )
    return (hom, sym, h_scale, rho), total


def random_inner(rng, cfg: GammaConfig, box: TruncationBox, **kw) -> InnerDerivation:
    return InnerDerivation(random_element(rng, cfg, box, **kw))


def scaling_group_samples(cfg: GammaConfig, span: int = 5, limit: int = 12) -> list:
    """Verified members of the scaling group, found by a bounded search.

    ``1`` and ``-1`` are always present; on a quadratic backend small
    integer combinations ``p + q*sqrt(d)`` are screened exactly.
    """
    found = [cfg.field.one, -cfg.field.one]
    if isinstance(cfg.field, QuadraticField):
        for p in range(-span, span + 1):
            for q in range(-span, span + 1):
                cand = Quad(p, q, cfg.field.d)
                if not cand or cand in found:
                    continue
                try:
                    ok = scaling_group_contains(cfg, cand)
                except ZeroScalar:  # pragma: no cover
                    ok = False
                if ok:
                    found.append(cand)
                    if len(found) >= limit:
                        return found
    return found


def random_params(rng, cfg: GammaConfig, scalings=None) -> AutomorphismParams:
    if scalings is None:
        scalings = scaling_group_samples(cfg)
    return AutomorphismParams(
        cfg,
        rng.choice(scalings),
        random_hom_int(rng, cfg),
        random_character(rng, cfg),
        rng.choice((1, -1)),
        random_scalar(rng, cfg.field, nonzero=True),
    )
