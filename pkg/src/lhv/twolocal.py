"""Two-local derivation tables and their certification as derivations.

A two-local map assigns an output to each sample point with no linearity
assumed; the defining property is that every *pair* of samples is matched
by some genuine derivation.  Witnesses are sought in a fixed-dimensional
space: inner coefficients over the box basis plus four multipliers against
a reference tuple of family derivations, all solved as one exact linear
system.  The certification pipeline computes the witness of a configured
anchor pair and checks that it already matches every sample.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    AlgebraElement,
    TruncationBox,
    bracket,
    format_basis_index,
)
from .derivations import (
    CoefficientDerivation,
    Derivation,
    HScalingDerivation,
    InnerDerivation,
    LToHDerivation,
    ScalingDerivation,
    SumDerivation,
)
from .errors import (
    NoWitnessForAnchorPair,
    ResidualNonZero,
    SupportOutsideBox,
)
from .gamma import GammaConfig, GammaHom, GSymbol
from .laurent import LaurentPoly, RhoOperator
from .linalg import LinearSystem
from .reports import Report


@dataclass(frozen=True)
class ReferenceFamilies:
    """The fixed family tuple that witness multipliers act against."""

    scaling: ScalingDerivation
    l_to_h: LToHDerivation
    h_scaling: HScalingDerivation
    coefficient: CoefficientDerivation

    def as_list(self):
        return [self.scaling, self.l_to_h, self.h_scaling, self.coefficient]


def default_reference_families(cfg: GammaConfig) -> ReferenceFamilies:
    """Session default: all-ones scaling map, constant symbol, unit polynomial, t*d/dt."""
    one = LaurentPoly.term(cfg.field.one, 0)
    return ReferenceFamilies(
        ScalingDerivation(cfg, GammaHom((one,) * cfg.rank)),
        LToHDerivation(GSymbol(cfg, one, LaurentPoly())),
        HScalingDerivation(cfg, one),
        CoefficientDerivation(cfg, RhoOperator(LaurentPoly.term(cfg.field.one, 1))),
    )


class TwoLocalTable:
    """Sample points and their assigned values; no linearity implied."""

    def __init__(self, samples, values):
        samples = list(samples)
        values = list(values)
        if len(samples) != len(values):
            raise ValueError("a value is required for every sample point")
        self.samples = samples
        self.values = values

    def __len__(self):
        return len(self.samples)

    @classmethod
    def from_derivation(cls, D: Derivation, samples) -> TwoLocalTable:
        samples = list(samples)
        return cls(samples, [D.apply(x) for x in samples])


@dataclass
class WitnessSpec:
    """One witness derivation: inner coefficients plus family multipliers."""

    cfg: GammaConfig
    inner_coeffs: dict
    multipliers: tuple
    families: ReferenceFamilies

    def inner_element(self) -> AlgebraElement:
        out = AlgebraElement.zero(self.cfg)
        for (kind, coords, i), c in self.inner_coeffs.items():
            out = out + AlgebraElement.basis_element(self.cfg, kind, coords, i).scaled(c)
        return out

    def to_derivation(self) -> SumDerivation:
        parts = [InnerDerivation(self.inner_element())]
        for lam, fam in zip(self.multipliers, self.families.as_list()):
            if lam:
                parts.append(fam.scaled(lam))
        return SumDerivation(self.cfg, parts)

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        return self.to_derivation().apply(x)


def _validate_samples(table: TwoLocalTable, box: TruncationBox):
    for x in table.samples:
        if not box.contains_element(x):
            raise SupportOutsideBox("sample point leaves the box")


def _solve_witness(
    table: TwoLocalTable,
    indices,
    box: TruncationBox,
    families: ReferenceFamilies | None,
    support=None,
    include_families: bool = True,
) -> WitnessSpec | None:
    """Exact witness matching the table at the given sample indices, or None.

    Elimination is column-major over the canonical unknown order (inner
    coefficients in box order, then the four multipliers) with free
    unknowns pinned to zero: the lexicographically minimal-support
    solution of the system.
    """
    cfg = table.samples[indices[0]].cfg
    _validate_samples(table, box)
    if families is None:
        families = default_reference_families(cfg)
    inner_support = list(support) if support is not None else box.basis()
    fam_list = families.as_list() if include_families else []
    points = [table.samples[i] for i in indices]

    columns = []
    for idx in inner_support:
        base = AlgebraElement.basis_element(cfg, *idx)
        columns.append([bracket(base, x) for x in points])
    for fam in fam_list:
        columns.append([fam.apply(x) for x in points])

    row_index: dict = {}

    def row_of(point_no, basis_idx):
        key = (point_no, basis_idx)
        if key not in row_index:
            row_index[key] = len(row_index)
        return row_index[key]

    cells: dict = {}
    for j, images in enumerate(columns):
        for point_no, img in enumerate(images):
            for (kind, coords), poly in img.terms.items():
                for exp, c in poly.coeffs.items():
                    r = row_of(point_no, (kind, coords, exp))
                    cells.setdefault(r, {})[j] = c
    rhs: dict = {}
    for point_no, i in enumerate(indices):
        for (kind, coords), poly in table.values[i].terms.items():
            for exp, c in poly.coeffs.items():
                r = row_of(point_no, (kind, coords, exp))
                rhs[r] = c

    sys = LinearSystem(len(columns))
    for r in range(len(row_index)):
        sys.add_equation(cells.get(r, {}), rhs.get(r, 0))
    sol = sys.solve()
    if sol is None:
        return None

    inner = {}
    lams = [cfg.field.zero] * 4
    for j, value in sol.items():
        if j < len(inner_support):
            inner[inner_support[j]] = value
        else:
            lams[j - len(inner_support)] = value
    return WitnessSpec(cfg, inner, tuple(lams), families)


def find_pair_witness(
    table: TwoLocalTable,
    x_idx: int,
    y_idx: int,
    box: TruncationBox,
    families: ReferenceFamilies | None = None,
    support=None,
    include_families: bool = True,
) -> WitnessSpec | None:
    """Solve for a witness matching the table at two sample points.

    The solution set is affine; the returned witness is the canonical
    minimal-support member (see :func:`_solve_witness`).  Returns None
    when the exact system is inconsistent.

    ``support`` restricts the inner coefficients to a subset of box
    indices; ``include_families=False`` drops the multiplier unknowns.
    Both exist so small systems can be cross-checked by brute force.
    """
    return _solve_witness(
        table, [x_idx, y_idx], box, families, support, include_families
    )


def verify_two_local(
    table: TwoLocalTable,
    box: TruncationBox,
    families: ReferenceFamilies | None = None,
) -> Report:
    """Find a witness for every unordered sample pair; lists failing pairs.

    An empty sample list passes vacuously.
    """
    n = len(table)
    failures = []
    checked = 0
    for i in range(n):
        for j in range(i + 1, n):
            checked += 1
            w = find_pair_witness(table, i, j, box, families)
            if w is None:
                failures.append({"pair": [i, j]})
    return Report("two-local", not failures, checked, failures=failures)


def certify_two_local(
    table: TwoLocalTable,
    box: TruncationBox,
    anchor_degrees=(0, 0),
    families: ReferenceFamilies | None = None,
) -> Derivation:
    """Certify a two-local table as the restriction of one global derivation.

    The anchor pair is ``(L(0...; i), L(e1; j))`` with configurable
    ``(i, j)``; both must literally appear among the samples.  An anchor
    witness is computed and required to reproduce the table at every
    sample.  The anchor-pair solution set is affine and, at box scale,
    genuinely underdetermined (e.g. the H-only family is invisible on the
    two L anchors), so the certificate is chosen as the canonical member
    that also fits the remaining samples whenever one exists; failing
    that, the minimal anchor witness is used and its nonzero residuals
    raise :class:`ResidualNonZero`.
    """
    if not table.samples:
        raise ValueError("cannot certify an empty sample list")
    cfg = table.samples[0].cfg
    i_deg, j_deg = anchor_degrees
    anchor_x = AlgebraElement.basis_element(cfg, "L", (0,) * cfg.rank, i_deg)
    anchor_y = AlgebraElement.basis_element(cfg, "L", cfg.unit(0), j_deg)
    try:
        x_idx = table.samples.index(anchor_x)
        y_idx = table.samples.index(anchor_y)
    except ValueError as exc:
        raise ValueError(
            f"samples must include the anchors {anchor_x} and {anchor_y}"
        ) from exc

    order = [x_idx, y_idx] + [
        k for k in range(len(table)) if k not in (x_idx, y_idx)
    ]
    witness = _solve_witness(table, order, box, families)
    if witness is None:
        witness = find_pair_witness(table, x_idx, y_idx, box, families)
        if witness is None:
            raise NoWitnessForAnchorPair(
                f"no witness matches the table at ({anchor_x}, {anchor_y})"
            )
    derivation = witness.to_derivation()
    residuals = []
    for sample, value in zip(table.samples, table.values):
        diff = value - derivation.apply(sample)
        if diff:
            residuals.append((sample, diff))
    if residuals:
        raise ResidualNonZero(
            "anchor witness misses "
            + ", ".join(str(s) for s, _ in residuals[:3]),
            residuals=residuals,
        )
    return derivation


def certification_residuals(
    table: TwoLocalTable, derivation: Derivation
) -> list:
    """Per-sample residual records for certificate output (all zero on success)."""
    out = []
    for sample, value in zip(table.samples, table.values):
        out.append(
            {
                "sample": str(sample),
                "residual": str(value - derivation.apply(sample)),
            }
        )
    return out
