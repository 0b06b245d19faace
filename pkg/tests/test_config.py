import json
import math

import pytest

from nonrecip.config import RunConfig, emit_config, parse_config
from nonrecip.errors import ParseError, ValidationError


MINIMAL = json.dumps({
    "device": {"gamma1": 0.2, "gamma2": 16.0, "g11": 0.13, "g12": 1.237}
})


def amp_config_text():
    return json.dumps({
        "device": {
            "gamma1": 0.2, "gamma2": 16.0,
            "g11": 0.13, "g12": 1.237,
            "phi": -1.25 * math.pi,
        },
        "model": "reduced",
        "sweep": {"omega_min": -0.5, "omega_max": 0.5, "n": 2001},
    })


def test_minimal_config_fills_defaults():
    cfg = parse_config(MINIMAL)
    p = cfg.device_params()
    assert p.kappa1 == 1.0 and p.kappa2 == 1.0
    assert p.nm1 == 0.0 and p.nm2 == 0.0
    assert p.phi == 0.0
    # omitted second drive column mirrors the first
    assert p.g21 == p.g11
    assert p.g22 == p.g12
    assert cfg.model == "reduced"


def test_amp_config_matches_device():
    p = parse_config(amp_config_text()).device_params()
    assert (p.g11, p.g12, p.gamma1, p.gamma2) == (0.13, 1.237, 0.2, 16.0)
    assert p.g21 == 0.13 and p.g22 == 1.237
    assert p.phi == -1.25 * math.pi


def test_negative_rate_names_the_field():
    bad = json.dumps({
        "device": {"gamma1": -1.0, "gamma2": 16.0, "g11": 0.1, "g12": 1.0}
    })
    with pytest.raises(ValidationError, match="gamma1"):
        parse_config(bad)


def test_unknown_keys_rejected():
    for doc in (
        {"device": {"gamma1": 1, "gamma2": 16, "g11": 0.1, "g12": 1, "gee": 2}},
        {"device": {"gamma1": 1, "gamma2": 16, "g11": 0.1, "g12": 1}, "swep": {}},
        {"device": {"gamma1": 1, "gamma2": 16, "g11": 0.1, "g12": 1},
         "sweep": {"omega_min": 0, "omega_max": 1, "n": 5, "step": 0.1}},
    ):
        with pytest.raises(ValidationError):
            parse_config(json.dumps(doc))


def test_malformed_json_reports_position():
    with pytest.raises(ParseError, match=r"line 1"):
        parse_config("{not json")


def test_missing_required_device_fields():
    with pytest.raises(ValidationError, match="g12"):
        parse_config(json.dumps({"device": {"gamma1": 1, "gamma2": 16, "g11": 0.1}}))


def test_sweep_block_validation():
    base = {"device": {"gamma1": 1, "gamma2": 16, "g11": 0.1, "g12": 1}}
    with pytest.raises(ValidationError, match="sweep"):
        parse_config(json.dumps({**base, "sweep": {"omega_min": 0.5, "omega_max": -0.5, "n": 9}}))
    with pytest.raises(ValidationError, match="sweep"):
        parse_config(json.dumps({**base, "sweep": {"omega_min": 0, "omega_max": 1, "n": 0}}))
    cfg = parse_config(json.dumps({**base, "sweep": {"omega_min": 0.3, "omega_max": 0.3, "n": 1}}))
    assert cfg.sweep.n == 1


def test_map_block_validation():
    base = {"device": {"gamma1": 1, "gamma2": 16, "g11": 0.1, "g12": 1}}
    good = {
        "axis1": {"param": "gamma1", "min": 0.1, "max": 2.0, "n": 5},
        "axis2": {"param": "gamma2", "min": 4.0, "max": 40.0, "n": 7},
        "scalar": "margin",
    }
    cfg = parse_config(json.dumps({**base, "map": good}))
    assert cfg.map.scalar == "margin"
    assert cfg.map.omega == 0.0
    bad_param = {**good, "axis1": {"param": "detuning", "min": 0, "max": 1, "n": 3}}
    with pytest.raises(ValidationError, match="detuning"):
        parse_config(json.dumps({**base, "map": bad_param}))
    bad_scalar = {**good, "scalar": "s11"}
    with pytest.raises(ValidationError, match="scalar"):
        parse_config(json.dumps({**base, "map": bad_scalar}))


def test_design_block_validation():
    base = {"device": {"gamma1": 1, "gamma2": 16, "g11": 0.323, "g12": 1.198}}
    cfg = parse_config(json.dumps({**base, "design": {"omega_min": -0.5, "omega_max": 0.5}}))
    assert cfg.design.optimize is None
    opt = {
        "bounds": {k: [0.1, 0.2] for k in
                   ("g11", "g12", "g21", "g22", "phi", "gamma1", "gamma2")},
        "epsilon_margin": 0.02,
    }
    cfg = parse_config(json.dumps({**base, "design":
                                   {"omega_min": -0.5, "omega_max": 0.5, "optimize": opt}}))
    assert cfg.design.optimize.bounds["g11"] == (0.1, 0.2)
    missing = {"bounds": {"g11": [0.1, 0.2]}, "epsilon_margin": 0.02}
    with pytest.raises(ValidationError, match="missing"):
        parse_config(json.dumps({**base, "design":
                                 {"omega_min": 0, "omega_max": 1, "optimize": missing}}))
    flipped = {"bounds": {**opt["bounds"], "g11": [0.2, 0.1]}, "epsilon_margin": 0.02}
    with pytest.raises(ValidationError, match="g11"):
        parse_config(json.dumps({**base, "design":
                                 {"omega_min": 0, "omega_max": 1, "optimize": flipped}}))


def test_unequal_kappas_rejected_for_reduced_models():
    doc = {
        "device": {"kappa1": 1.0, "kappa2": 1.5,
                   "gamma1": 1, "gamma2": 16, "g11": 0.1, "g12": 1},
        "model": "reduced",
    }
    with pytest.raises(ValidationError, match="kappa"):
        parse_config(json.dumps(doc))
    doc["model"] = "full"
    assert parse_config(json.dumps(doc)).model == "full"
    doc["design"] = {"omega_min": -0.5, "omega_max": 0.5}
    with pytest.raises(ValidationError, match="kappa"):
        parse_config(json.dumps(doc))


def test_model_name_validation():
    doc = {"device": {"gamma1": 1, "gamma2": 16, "g11": 0.1, "g12": 1},
           "model": "exact"}
    with pytest.raises(ValidationError, match="model"):
        parse_config(json.dumps(doc))


def test_emit_round_trip_is_exact():
    docs = [
        MINIMAL,
        amp_config_text(),
        json.dumps({
            "device": {"gamma1": 1.0, "gamma2": 16.0, "g11": 0.336,
                       "g12": 1.333, "phi": 0.9424456508431731 * math.pi,
                       "nm1": 3.0, "nm2": 3.0},
            "model": "full",
            "map": {"axis1": {"param": "gamma1", "min": 0.1, "max": 2.0, "n": 40},
                    "axis2": {"param": "gamma2", "min": 4.0, "max": 40.0, "n": 37},
                    "scalar": "t12_db", "omega": -0.0914},
            "design": {"omega_min": -0.5, "omega_max": 0.5,
                       "optimize": {"bounds": {
                           "g11": [0.3, 0.37], "g12": [1.2, 1.47],
                           "g21": [0.3, 0.37], "g22": [1.2, 1.47],
                           "phi": [2.6, 3.3], "gamma1": [0.9, 1.1],
                           "gamma2": [14.4, 17.6]},
                           "epsilon_margin": 0.02}},
        }),
    ]
    for doc in docs:
        cfg = parse_config(doc)
        text = emit_config(cfg)
        again = parse_config(text)
        assert again == cfg
        assert emit_config(again) == text
        assert text.endswith("\n") and "\r" not in text


def test_emitted_config_is_sorted_and_stable():
    cfg = parse_config(amp_config_text())
    text = emit_config(cfg)
    keys = list(json.loads(text))
    assert keys == sorted(keys)
