import json

import pytest

from cadrift.config import ExperimentConfig, load_config, validate_config
from cadrift.detectors import CurieConfig
from cadrift.exceptions import ImproperlyConfigured
from cadrift.streams import StreamSpec
from cadrift.utils.setter import parse_assignment, pointed_setter

SINE = {
    "name": "sine",
    "concepts": [{"kind": "sine", "function": 1}, {"kind": "sine", "function": 1, "reversed": True}],
    "positions": [500],
    "length": 1000,
}


def write_config(tmp_path, data):
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps(data))
    return path


def test_defaults_cover_every_learner_and_detector():
    config = validate_config({"streams": [SINE]})
    assert [c.kind for c in config.learners] == ["nb", "knn"]
    assert [c.kind for c in config.detectors] == ["ddm", "eddm", "adwin", "ph", "curie"]
    assert config.seeds == [1]
    assert config.n_runs == 10
    assert len(list(config.runs())) == 10


def test_config_round_trips_through_json():
    config = validate_config(
        {
            "streams": [SINE],
            "detectors": [{"kind": "curie", "num_mutants_neighbors": 3}],
            "seeds": "1,2",
        }
    )
    restored = ExperimentConfig.validate_json(config.model_dump_json())
    assert restored == config
    assert restored.detectors[0].n_muts_allowed == 3


def test_seeds_accept_a_comma_separated_string():
    assert validate_config({"streams": [SINE], "seeds": "3, 1,2"}).seeds == [3, 1, 2]
    with pytest.raises(ImproperlyConfigured):
        validate_config({"streams": [SINE], "seeds": ""})


def test_preset_expands_to_the_benchmark_suite():
    config = validate_config({"preset": "paper-suite"})
    assert len(config.all_streams()) == 20
    assert config.n_runs == 2 * 5 * 20


def test_preset_and_streams_combine():
    config = validate_config({"preset": "paper-suite", "streams": [SINE]})
    assert [s.label for s in config.all_streams()][-1] == "sine"


def test_one_run_per_combination():
    config = validate_config(
        {
            "streams": [SINE],
            "learners": [{"kind": "nb"}],
            "detectors": [{"kind": "curie"}],
        }
    )
    ((source, seed, learner, detector),) = list(config.runs())
    assert (source.name, seed, learner.kind) == ("sine", 1, "nb")
    assert isinstance(detector, CurieConfig)


@pytest.mark.parametrize(
    "data, key",
    [
        ({}, "__root__"),
        ({"streams": [SINE, SINE]}, "__root__"),
        ({"streams": [SINE], "detectors": [{"kind": "ddm"}, {"kind": "ddm"}]}, "__root__"),
        ({"streams": [SINE], "prep_size": 1000}, "__root__"),
        ({"streams": [SINE], "detectors": [{"kind": "hddm"}]}, "detectors"),
        ({"streams": [SINE], "alpha": 2}, "alpha"),
        ({"streams": [SINE], "unknown": 1}, "unknown"),
        ({"streams": [dict(SINE, source="kafka")]}, "streams"),
    ],
)
def test_invalid_configs_raise_with_detail(data, key):
    with pytest.raises(ImproperlyConfigured) as excinfo:
        validate_config(data)
    assert key in excinfo.value.detail


def test_load_config_errors(tmp_path):
    with pytest.raises(ImproperlyConfigured, match="does not exist"):
        load_config(tmp_path / "missing.json")

    broken = tmp_path / "broken.json"
    broken.write_text('{"streams": [')
    with pytest.raises(ImproperlyConfigured, match="not valid JSON"):
        load_config(broken)

    broken.write_text("[1, 2]")
    with pytest.raises(ImproperlyConfigured, match="JSON object"):
        load_config(broken)


def test_overrides_apply_on_top_of_the_file(tmp_path):
    path = write_config(tmp_path, {"streams": [SINE], "detectors": [{"kind": "curie"}]})
    overrides = [
        parse_assignment("detectors.0.bins_per_dim=20"),
        parse_assignment("streams.0.noise=0.1"),
        parse_assignment("output_dir=out/run1"),
        ("seeds", "4,5"),
    ]
    config = load_config(path, overrides)
    assert config.detectors[0].bins_per_dim == 20
    assert config.streams[0].noise == 0.1
    assert str(config.output_dir) == "out/run1"
    assert config.seeds == [4, 5]


def test_load_config_without_a_file_uses_the_base():
    config = load_config(overrides=[("streams", [SINE])], base={"preset": None})
    assert config.n_runs == 10


def test_parse_assignment():
    assert parse_assignment("a.b=3") == ("a.b", 3)
    assert parse_assignment("name=sine") == ("name", "sine")
    assert parse_assignment("flags=[1, 2]") == ("flags", [1, 2])
    with pytest.raises(ValueError):
        parse_assignment("no-equals-sign")


def test_pointed_setter_creates_containers():
    data = {}
    pointed_setter(data, "detectors.0.kind", "curie")
    pointed_setter(data, "streams.0.tree.max_tree_depth", 4)
    assert data == {"detectors": [{"kind": "curie"}], "streams": [{"tree": {"max_tree_depth": 4}}]}


# a stream without "source" is a generated one
def test_streams_default_to_the_generator():
    config = validate_config({"streams": [SINE]})
    assert isinstance(config.streams[0], StreamSpec)
    assert config.streams[0].source == "generator"


def test_pointed_setter_rejects_indexes_past_the_end():
    data = {"detectors": [{"kind": "ddm"}]}
    with pytest.raises(ValueError, match="outside a list of 1 items"):
        pointed_setter(data, "detectors.3.kind", "curie")
    assert data == {"detectors": [{"kind": "ddm"}]}

    pointed_setter(data, "detectors.1.kind", "curie")
    assert data == {"detectors": [{"kind": "ddm"}, {"kind": "curie"}]}


def test_out_of_range_override_is_a_config_error(tmp_path):
    path = write_config(tmp_path, {"streams": [SINE], "detectors": [{"kind": "ddm"}]})
    with pytest.raises(ImproperlyConfigured, match="Cannot apply override"):
        load_config(path, [("detectors.3.kind", "curie")])


# only the second detector is wrong; the detail keeps its position
def test_detail_keeps_list_positions():
    with pytest.raises(ImproperlyConfigured) as excinfo:
        validate_config({"streams": [SINE], "detectors": [{"kind": "ddm"}, {"kind": "hddm"}]})
    assert list(excinfo.value.detail["detectors"]) == ["1"]
