"""JSON wire formats and the session configuration file.

Formats (see docs/grammar.md for the full schemas):

* element: ``{"terms": [{"kind": "L"|"H", "gamma": [int,...], "coeff": "<laurent>"}]}``
* derivation: one-key objects ``{"inner": <element>}``, ``{"dphi": ...}``,
  ``{"dg": ...}``, ``{"db": ...}``, ``{"drho": ...}``, ``{"sum": [...]}``,
  ``{"table": ...}``
* two-local table: ``{"samples": [<element>...], "values": [<element>...]}``
* bilinear table: ``{"entries": [{"i": <basis>, "j": <basis>, "value": <element>}]}``
* automorphism parameters: ``{"a": "<scalar>", "phi": [int...],
  "chi": ["<scalar>"...], "psi": 1|-1, "b": "<scalar>"}``
* config file: ``{"schema": 1, "field": ..., "gamma": ..., "box": ...}``

Zero elements serialize as an empty ``terms`` list, never as a missing
field, and all term lists are emitted in canonical order so that equal
values produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dataclass_field

from .algebra import AlgebraElement, TruncationBox, basis_sort_key
from .autos import AutomorphismParams
from .bider import BilinearTable, LinearTable
from .derivations import (
    CoefficientDerivation,
    Derivation,
    HScalingDerivation,
    InnerDerivation,
    LToHDerivation,
    ScalingDerivation,
    SumDerivation,
    TableDerivation,
)
from .errors import ConfigError
from .gamma import Character, GammaConfig, GammaHom, GSymbol
from .laurent import LaurentPoly, RhoOperator, format_laurent, parse_laurent
from .scalars import field_from_json
from .twolocal import TwoLocalTable


# --------------------------------------------------------------------------
# elements and basis indices
# --------------------------------------------------------------------------


def element_to_json(x: AlgebraElement) -> dict:
    terms = []
    for (kind, coords), poly in sorted(
        x.terms.items(), key=lambda kv: basis_sort_key((kv[0][0], kv[0][1], 0))
    ):
        terms.append(
            {"kind": kind, "gamma": list(coords), "coeff": format_laurent(poly)}
        )
    return {"terms": terms}


def element_from_json(cfg: GammaConfig, obj) -> AlgebraElement:
    if not isinstance(obj, dict) or "terms" not in obj:
        raise ConfigError('an element needs a "terms" list')
    out = AlgebraElement.zero(cfg)
    for entry in obj["terms"]:
        kind = entry.get("kind")
        if kind not in ("L", "H"):
            raise ConfigError(f'term kind must be "L" or "H", got {kind!r}')
        coords = tuple(entry.get("gamma", ()))
        poly = parse_laurent(entry["coeff"], cfg.field)
        out = out + AlgebraElement.from_term(cfg, kind, coords, poly)
    return out


def basis_index_to_json(idx) -> dict:
    kind, coords, i = idx
    return {"kind": kind, "gamma": list(coords), "t": i}


def basis_index_from_json(obj) -> tuple:
    try:
        return (obj["kind"], tuple(obj["gamma"]), int(obj["t"]))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed basis index {obj!r}") from exc


# --------------------------------------------------------------------------
# derivations
# --------------------------------------------------------------------------


def derivation_to_json(D: Derivation) -> dict:
    if isinstance(D, InnerDerivation):
        return {"inner": element_to_json(D.x)}
    if isinstance(D, ScalingDerivation):
        return {"dphi": {"gen_values": [format_laurent(v) for v in D.hom.gen_values]}}
    if isinstance(D, LToHDerivation):
        return {"dg": {"c": format_laurent(D.sym.c), "d": format_laurent(D.sym.d)}}
    if isinstance(D, HScalingDerivation):
        return {"db": format_laurent(D.poly)}
    if isinstance(D, CoefficientDerivation):
        return {"drho": format_laurent(D.rho.p)}
    if isinstance(D, SumDerivation):
        return {"sum": [derivation_to_json(p) for p in D.parts]}
    if isinstance(D, TableDerivation):
        entries = [
            {**basis_index_to_json(idx), "value": element_to_json(val)}
            for idx, val in sorted(D.values.items(), key=lambda kv: basis_sort_key(kv[0]))
        ]
        return {"table": {"entries": entries}}
    raise ConfigError(f"cannot serialize derivation {D!r}")


def derivation_from_json(cfg: GammaConfig, box: TruncationBox, obj) -> Derivation:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ConfigError("a derivation is a one-key JSON object")
    [(key, payload)] = obj.items()
    if key == "inner":
        return InnerDerivation(element_from_json(cfg, payload))
    if key == "dphi":
        values = [parse_laurent(v, cfg.field) for v in payload["gen_values"]]
        if len(values) != cfg.rank:
            raise ConfigError("dphi needs one generator value per generator")
        return ScalingDerivation(cfg, GammaHom(tuple(values)))
    if key == "dg":
        return LToHDerivation(
            GSymbol(
                cfg,
                parse_laurent(payload["c"], cfg.field),
                parse_laurent(payload["d"], cfg.field),
            )
        )
    if key == "db":
        return HScalingDerivation(cfg, parse_laurent(payload, cfg.field))
    if key == "drho":
        return CoefficientDerivation(cfg, RhoOperator(parse_laurent(payload, cfg.field)))
    if key == "sum":
        return SumDerivation(cfg, [derivation_from_json(cfg, box, p) for p in payload])
    if key == "table":
        values = {}
        for entry in payload["entries"]:
            idx = basis_index_from_json(entry)
            values[idx] = element_from_json(cfg, entry["value"])
        return TableDerivation(cfg, box, values)
    raise ConfigError(f"unknown derivation variant {key!r}")


def decomposition_to_json(result) -> dict:
    return {
        "dphi": {"gen_values": [format_laurent(v) for v in result.hom.gen_values]},
        "dg": {"c": format_laurent(result.sym.c), "d": format_laurent(result.sym.d)},
        "db": format_laurent(result.h_scale),
        "drho": format_laurent(result.rho.p),
        "residual": {
            "entries": [
                {**basis_index_to_json(idx), "value": element_to_json(val)}
                for idx, val in sorted(
                    result.residual.items(), key=lambda kv: basis_sort_key(kv[0])
                )
            ]
        },
    }


# --------------------------------------------------------------------------
# two-local and bilinear tables
# --------------------------------------------------------------------------


def twolocal_to_json(table: TwoLocalTable) -> dict:
    return {
        "samples": [element_to_json(x) for x in table.samples],
        "values": [element_to_json(v) for v in table.values],
    }


def twolocal_from_json(cfg: GammaConfig, obj) -> TwoLocalTable:
    try:
        samples = [element_from_json(cfg, x) for x in obj["samples"]]
        values = [element_from_json(cfg, v) for v in obj["values"]]
    except (KeyError, TypeError) as exc:
        raise ConfigError("a two-local table needs samples and values lists") from exc
    return TwoLocalTable(samples, values)


def bilinear_to_json(table: BilinearTable) -> dict:
    entries = []
    for (b1, b2), val in sorted(
        table.values.items(), key=lambda kv: (basis_sort_key(kv[0][0]), basis_sort_key(kv[0][1]))
    ):
        entries.append(
            {
                "i": basis_index_to_json(b1),
                "j": basis_index_to_json(b2),
                "value": element_to_json(val),
            }
        )
    return {"entries": entries}


def bilinear_from_json(cfg: GammaConfig, box: TruncationBox, obj) -> BilinearTable:
    values = {}
    for entry in obj.get("entries", ()):
        b1 = basis_index_from_json(entry["i"])
        b2 = basis_index_from_json(entry["j"])
        values[(b1, b2)] = element_from_json(cfg, entry["value"])
    return BilinearTable(cfg, box, values)


def linear_to_json(table: LinearTable) -> dict:
    entries = []
    for idx, val in sorted(table.values.items(), key=lambda kv: basis_sort_key(kv[0])):
        entries.append({"i": basis_index_to_json(idx), "value": element_to_json(val)})
    return {"entries": entries}


def linear_from_json(cfg: GammaConfig, box: TruncationBox, obj) -> LinearTable:
    values = {}
    for entry in obj.get("entries", ()):
        idx = basis_index_from_json(entry["i"])
        values[idx] = element_from_json(cfg, entry["value"])
    return LinearTable(cfg, box, values)


# --------------------------------------------------------------------------
# automorphism parameters
# --------------------------------------------------------------------------


def params_to_json(p: AutomorphismParams) -> dict:
    fmt = p.cfg.field.format
    return {
        "a": fmt(p.a),
        "phi": list(p.phi.gen_values),
        "chi": [fmt(v) for v in p.chi.gen_values],
        "psi": p.psi,
        "b": fmt(p.b),
    }


def params_from_json(cfg: GammaConfig, obj) -> AutomorphismParams:
    try:
        return AutomorphismParams(
            cfg,
            cfg.field.parse(obj["a"]),
            GammaHom(tuple(int(v) for v in obj["phi"])),
            Character(tuple(cfg.field.parse(v) for v in obj["chi"])),
            int(obj["psi"]),
            cfg.field.parse(obj["b"]),
        )
    except KeyError as exc:
        raise ConfigError(f"automorphism parameters are missing {exc}") from exc


# --------------------------------------------------------------------------
# session configuration
# --------------------------------------------------------------------------


@dataclass
class Session:
    """Parsed configuration: backend, lattice, box, and suite knobs."""

    field: object
    cfg: GammaConfig
    box: TruncationBox
    anchors: tuple = (0, 0)
    lambda_reference: tuple | None = None
    seed: int = 0
    draws: int | None = None
    source: dict = dataclass_field(default_factory=dict)


def load_config(data) -> Session:
    """Build a session from a config dict, JSON string, or file path."""
    if isinstance(data, str):
        try:
            if data.lstrip().startswith("{"):
                data = json.loads(data)
            else:
                with open(data, "r", encoding="utf-8") as fh:
                    data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    if data.get("schema") != 1:
        raise ConfigError('config needs "schema": 1')
    for key in ("field", "gamma", "box"):
        if key not in data:
            raise ConfigError(f'config is missing "{key}"')
    field = field_from_json(data["field"])
    gamma = data["gamma"]
    if not isinstance(gamma, dict) or "generators" not in gamma:
        raise ConfigError('"gamma" needs a "generators" list')
    try:
        cfg = GammaConfig(field, [field.parse(g) for g in gamma["generators"]])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    boxspec = data["box"]
    try:
        box = TruncationBox(
            boxspec["gamma_bounds"], boxspec["t_bounds"], boxspec.get("pad")
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed box: {exc}") from exc
    box.validate_for(cfg)
    anchors = data.get("anchors", {})
    lam_ref = data.get("lambda_reference")
    return Session(
        field=field,
        cfg=cfg,
        box=box,
        anchors=(int(anchors.get("i", 0)), int(anchors.get("j", 0))),
        lambda_reference=tuple(lam_ref) if lam_ref is not None else None,
        seed=int(data.get("seed", 0)),
        draws=data.get("draws"),
        source=data,
    )
