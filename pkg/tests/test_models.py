import json

import numpy as np
import pytest

from gns_entropy.exceptions import SchemaError
from gns_entropy.models import (
    Scenario, Task, encode_complex, encode_matrix, load_scenario, scenario_from_dict, to_matrix,
    to_vector,
)


def minimal(**overrides):
    data = {
        "space": {"dimension": 2},
        "state": {"family": "m2_lambda", "params": {"lambda": 0.25}},
        "subalgebra": {"named": "full"},
        "tasks": ["gns", "entropy"],
    }
    data.update(overrides)
    return data


def test_complex_encoding():
    assert encode_complex(1.5) == 1.5
    assert encode_complex(1 + 2j) == [1.0, 2.0]
    np.testing.assert_allclose(to_vector([1, [0, 1]]), [1, 1j])
    m = np.array([[1, -1j], [1j, 2]])
    np.testing.assert_allclose(to_matrix(encode_matrix(m)), m)


def test_scenario_defaults_from_environment(clean_env):
    clean_env.setenv("GNS_SEED", "5")
    scenario = scenario_from_dict(minimal())
    assert scenario.seed == 5
    assert scenario.tolerance == 1e-10
    assert scenario.tasks == [Task.GNS, Task.ENTROPY]


def test_schema_round_trip():
    scenario = scenario_from_dict(minimal(seed=3, tolerance=1e-9))
    assert load_scenario(scenario.model_dump_json()) == scenario


def test_invalid_json():
    with pytest.raises(SchemaError):
        load_scenario("{not json")


def test_missing_family_parameter_reports_path():
    data = minimal(state={"family": "bose3", "params": {"theta": 0.1}})
    with pytest.raises(SchemaError) as info:
        scenario_from_dict(data)
    assert info.value.field_path == "state"
    assert "phi" in str(info.value)


def test_exactly_one_state_spec():
    data = minimal(state={"vector": [1, 0], "family": "m2_lambda", "params": {"lambda": 0.5}})
    with pytest.raises(SchemaError):
        scenario_from_dict(data)


def test_bad_complex_entry():
    with pytest.raises(SchemaError) as info:
        scenario_from_dict(minimal(state={"vector": [[1, 2, 3], 0]}))
    assert info.value.field_path.startswith("state")


def test_task_sections_required():
    with pytest.raises(SchemaError, match="evolution"):
        scenario_from_dict(minimal(tasks=["evolve"]))
    with pytest.raises(SchemaError, match="parity"):
        scenario_from_dict(minimal(subalgebra={"named": "parity_commutant"}))
    with pytest.raises(SchemaError, match="theta"):
        scenario_from_dict(minimal(tasks=["kraus"], kraus={"theta_from": 0.1, "theta_to": 0.2}))


def test_times_must_increase():
    data = minimal(tasks=["evolve"], evolution={"hamiltonian": [[1, 0], [0, -1]], "times": [0, 1, 1]})
    with pytest.raises(SchemaError, match="increasing"):
        scenario_from_dict(data)


def test_space_kinds_are_exclusive():
    with pytest.raises(SchemaError):
        scenario_from_dict(minimal(space={"dimension": 6, "one_particle_dim": 3}))
    with pytest.raises(SchemaError):
        scenario_from_dict(minimal(space={"one_particle_dim": 3, "particles": 2}))


def test_scenario_file_layout():
    text = json.dumps(minimal(log_base="2", mode="isotypic_only"))
    scenario = load_scenario(text)
    assert scenario.log_base.value == "2"
    assert scenario.mode.value == "isotypic_only"
    assert isinstance(scenario, Scenario)
