import json
from fractions import Fraction

import pytest

from lhv import (
    AlgebraElement,
    BilinearTable,
    InnerDerivation,
    LinearTable,
    TwoLocalTable,
    tabulate,
)
from lhv.errors import ConfigError
from lhv.sampling import random_element, random_family_sum, random_params
from lhv.serialize import (
    bilinear_from_json,
    bilinear_to_json,
    derivation_from_json,
    derivation_to_json,
    element_from_json,
    element_to_json,
    linear_from_json,
    linear_to_json,
    load_config,
    params_from_json,
    params_to_json,
    twolocal_from_json,
    twolocal_to_json,
)

from conftest import make_h, make_l


def test_element_round_trip(cfg, box, rng):
    for _ in range(20):
        x = random_element(rng, cfg, box)
        assert element_from_json(cfg, element_to_json(x)) == x


def test_zero_element_serializes_explicitly(cfg):
    payload = element_to_json(AlgebraElement.zero(cfg))
    assert payload == {"terms": []}
    assert element_from_json(cfg, payload) == AlgebraElement.zero(cfg)


def test_element_json_is_canonical(cfg):
    x = make_h(cfg, 1, 0) + make_l(cfg, -1, 2)
    y = make_l(cfg, -1, 2) + make_h(cfg, 1, 0)
    assert json.dumps(element_to_json(x)) == json.dumps(element_to_json(y))


def test_element_json_validates(cfg):
    with pytest.raises(ConfigError):
        element_from_json(cfg, {"nope": []})
    with pytest.raises(ConfigError):
        element_from_json(cfg, {"terms": [{"kind": "X", "gamma": [0], "coeff": "1"}]})


def test_derivation_variants_round_trip(cfg, box, rng):
    (hom, sym, h_scale, rho), total = random_family_sum(rng, cfg, (-1, 1))
    specs = list(total.parts) + [
        InnerDerivation(random_element(rng, cfg, box)),
        total,
        tabulate(total, box),
    ]
    for D in specs:
        payload = derivation_to_json(D)
        rebuilt = derivation_from_json(cfg, box, payload)
        for idx in box.basis():
            assert rebuilt.apply_basis(*idx) == D.apply_basis(*idx)


def test_twolocal_round_trip(cfg, box, rng):
    samples = [random_element(rng, cfg, box) for _ in range(3)]
    values = [random_element(rng, cfg, box) for _ in range(3)]
    table = TwoLocalTable(samples, values)
    rebuilt = twolocal_from_json(cfg, twolocal_to_json(table))
    assert rebuilt.samples == samples
    assert rebuilt.values == values


def test_bilinear_round_trip(cfg, box):
    table = BilinearTable.from_bracket_multiple(cfg, box, Fraction(2, 3))
    rebuilt = bilinear_from_json(cfg, box, bilinear_to_json(table))
    assert rebuilt.values == table.values


def test_linear_round_trip(cfg, box):
    table = LinearTable.from_function(
        cfg, box, lambda idx: AlgebraElement.basis_element(cfg, *idx)
    )
    rebuilt = linear_from_json(cfg, box, linear_to_json(table))
    assert rebuilt.values == table.values


def test_params_round_trip(cfg, rng):
    for _ in range(10):
        p = random_params(rng, cfg)
        assert params_from_json(cfg, params_to_json(p)) == p


def test_params_round_trip_quadratic(qcfg, rng):
    for _ in range(6):
        p = random_params(rng, qcfg)
        assert params_from_json(qcfg, params_to_json(p)) == p


def test_load_config_happy_path(tmp_path):
    payload = {
        "schema": 1,
        "field": {"quadratic": 2},
        "gamma": {"generators": ["1", "sqrt(2)"]},
        "box": {"gamma_bounds": [[-1, 1], [-1, 1]], "t_bounds": [-1, 1]},
        "anchors": {"i": 1, "j": 0},
        "seed": 7,
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(payload))
    session = load_config(str(path))
    assert session.cfg.rank == 2
    assert session.anchors == (1, 0)
    assert session.seed == 7
    assert session.box.pad == 1


def test_load_config_rejects_bad_input(tmp_path):
    with pytest.raises(ConfigError):
        load_config({"schema": 2, "field": "rationals", "gamma": {}, "box": {}})
    with pytest.raises(ConfigError):
        load_config({"schema": 1, "field": "rationals", "gamma": {}})
    with pytest.raises(ConfigError):
        load_config(
            {
                "schema": 1,
                "field": "octonions",
                "gamma": {"generators": ["1"]},
                "box": {"gamma_bounds": [[-1, 1]], "t_bounds": [-1, 1]},
            }
        )
    with pytest.raises(ConfigError):
        load_config(
            {
                "schema": 1,
                "field": "rationals",
                "gamma": {"generators": ["1", "2"]},
                "box": {"gamma_bounds": [[-1, 1], [-1, 1]], "t_bounds": [-1, 1]},
            }
        )
    path = tmp_path / "nonexistent.json"
    with pytest.raises(ConfigError):
        load_config(str(path))
