import copy
import random

import pytest
import yaml

from rigdesign.catalog import (config_from_dict, format_number, load_config, parse_catalog,
                               parse_catalog_text, resolve_input, serialize_catalog)
from rigdesign.errors import CatalogError, ConfigError

MINI = """# two-row catalog
[cameras]
name,sensor_width_mm,sensor_height_mm,res_width_px,res_height_px,dynamic_range_db
acA1440-220uc,5,3.7,1440,1080,71

[lenses]
name,focal_length_mm,min_f_stop,distortion_pct
LM6HC,6,1.8,-0.2
"""


def test_shipped_catalog(catalog):
    assert len(catalog.cameras) == 5
    assert len(catalog.lenses) == 2
    cam = catalog.camera("acA1920-40uc")
    assert (cam.sensor_width_mm, cam.sensor_height_mm, cam.res_width_px, cam.res_height_px) == (11.3, 7.1, 1920, 1200)
    assert catalog.lens("LM6HC").distortion_pct == -0.2
    assert catalog.lens("LM4-class").distortion_pct is None


def test_unknown_name(catalog):
    with pytest.raises(CatalogError):
        catalog.camera("nope")


def test_camera_row_roundtrip():
    text = serialize_catalog(parse_catalog_text(MINI))
    assert "acA1440-220uc,5,3.7,1440,1080,71" in text.splitlines()
    assert parse_catalog_text(text) == parse_catalog_text(MINI)


def test_shipped_roundtrip(catalog):
    again = parse_catalog_text(serialize_catalog(catalog))
    assert again.cameras == catalog.cameras and again.lenses == catalog.lenses
    assert again.digest() == catalog.digest()


def test_digest_order_independent(catalog):
    rows = list(catalog.cameras)
    random.Random(1).shuffle(rows)
    shuffled = type(catalog)(rows, list(reversed(catalog.lenses)), catalog.camera_columns,
                             catalog.lens_columns, catalog.extras)
    assert shuffled.digest() == catalog.digest()


def test_extra_columns_preserved():
    text = MINI.replace("dynamic_range_db\n", "dynamic_range_db,price_eur\n").replace(",71\n", ",71,450\n")
    cat = parse_catalog_text(text)
    assert cat.extras[("camera", "acA1440-220uc")] == {"price_eur": "450"}
    assert "acA1440-220uc,5,3.7,1440,1080,71,450" in serialize_catalog(cat)


@pytest.mark.parametrize("x,s", [(5, "5"), (5.0, "5"), (3.7, "3.7"), (0.0035, "0.0035"), (1920, "1920")])
def test_format_number(x, s):
    assert format_number(x) == s


def _error(text):
    with pytest.raises(CatalogError) as exc:
        parse_catalog_text(text, "cat.csv")
    return exc.value


def test_empty_file():
    assert "empty" in str(_error("# nothing\n"))


def test_missing_column():
    err = _error(MINI.replace(",sensor_height_mm", ""))
    assert err.line == 3 and "sensor_height_mm" in str(err)


def test_non_numeric_cell():
    err = _error(MINI.replace("1440,1080", "1440,ten80"))
    assert (err.line, err.column) == (4, "res_height_px")
    assert "cat.csv" in err.location


def test_non_positive_cell():
    err = _error(MINI.replace(",5,3.7", ",0,3.7"))
    assert err.column == "sensor_width_mm"


def test_duplicate_name():
    err = _error(MINI.replace("LM6HC,6,1.8,-0.2\n", "LM6HC,6,1.8,-0.2\nLM6HC,8,2,\n"))
    assert err.line == 9 and err.column == "name"


def test_ragged_row():
    assert _error(MINI.replace("1080,71", "1080")).line == 4


def test_missing_section():
    assert "lenses" in str(_error(MINI.split("[lenses]")[0]))


def test_resolve_shipped_names():
    assert resolve_input("paper_catalog").name == "paper_catalog.csv"
    assert parse_catalog("paper_catalog").camera("acA2440-35uc").sensor_width_mm == 8.45


# --- config ------------------------------------------------------------------

@pytest.fixture
def raw():
    with open(resolve_input("paper_config")) as fh:
        return yaml.safe_load(fh)


def test_shipped_config(config):
    c = config.constraints
    assert c.object_range_mm == (383, 683)
    assert c.target.min_pixels_px == 62
    assert config.stereo.max_depth_error_mm == 3
    assert config.motion.required_views == 3
    assert config.as_built_baseline_mm == 170


def test_config_digest_stable(raw):
    assert config_from_dict(copy.deepcopy(raw)).digest() == config_from_dict(raw).digest()


@pytest.mark.parametrize("section,key,value,column", [
    ("motion", "required_views", 0, "motion"),
    ("stereo", "z_near_mm", 900, "stereo"),
    ("saturation", "channel_threshold", 300, "saturation"),
    ("motion", "plane", "mid", "motion.plane"),
    ("design", "object_range_mm", [383], "design.object_range_mm"),
])
def test_invalid_values(raw, section, key, value, column):
    raw[section][key] = value
    with pytest.raises(ConfigError) as exc:
        config_from_dict(raw, "cfg.yaml")
    assert exc.value.column == column


def test_missing_key(raw):
    del raw["design"]["target_size_mm"]
    with pytest.raises(ConfigError) as exc:
        config_from_dict(raw)
    assert exc.value.column == "design.target_size_mm"


def test_unknown_key_rejected(raw):
    raw["design"]["nozzle_clearance"] = 233
    with pytest.raises(ConfigError, match="unit suffix"):
        config_from_dict(raw)


def test_unknown_section_rejected(raw):
    raw["extras"] = {}
    with pytest.raises(ConfigError):
        config_from_dict(raw)


def test_bad_yaml(tmp_path):
    p = tmp_path / "c.yaml"
    p.write_text("design: [unclosed\n")
    with pytest.raises(ConfigError) as exc:
        load_config(p)
    assert exc.value.line is not None


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "none.yaml")
