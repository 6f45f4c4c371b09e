import json
import math
import pathlib

import numpy as np
import pytest

import divcurl

SCHEMA = pathlib.Path(__file__).resolve().parents[2] / "schemas" / "report.schema.json"


def test_mesh_topology():
    cube = divcurl.Mesh("cube:2")
    assert cube.num_tets == 48
    assert cube.num_vertices - cube.num_edges + cube.num_faces - cube.num_tets == 1
    assert divcurl.Mesh("torus:2,0.5,0,cut").betti == (0, 1)
    assert divcurl.Mesh("shell:1,2,0").betti == (1, 0)


def test_bad_spec_raises_input_error():
    with pytest.raises(divcurl.InputError):
        divcurl.Mesh("pyramid:3")


def test_torus_basis_has_unit_flux():
    out = divcurl.harmonic_basis(divcurl.Mesh("torus:2,0.5,0,cut"), "magnetic")
    assert out["report"]["dimension"] == 1
    assert abs(out["report"]["flux_gram"][0][0] - 1.0) < 1e-8
    assert len(out["fields"]) == 1


def test_decomposition_reconstructs():
    mesh = divcurl.Mesh("shell:1,2,0")
    u = divcurl.random_field(mesh, "NED", seed=3)
    assert u.shape == (mesh.num_edges,)
    out = divcurl.decompose(mesh, "electric", u, coeff="random:1")
    assert out["report"]["reconstruction"] <= 1e-8
    # In the Euclidean norm the pieces need not be orthogonal, but they must sum back to u.
    total = out["h"] + out["gradient"] + out["rotational"]
    assert np.linalg.norm(total - u) <= 1e-8 * np.linalg.norm(u)


def test_decompose_rejects_wrong_size():
    mesh = divcurl.Mesh("cube:2")
    with pytest.raises(divcurl.DimensionError):
        divcurl.decompose(mesh, "magnetic", np.zeros(3))


def test_friedrichs_torus_without_l2_is_unbounded():
    mesh = divcurl.Mesh("torus:2,0.5,0,cut")
    assert divcurl.friedrichs(mesh, "normal", include_l2=False)["unbounded"] is True
    c = divcurl.friedrichs(mesh, "normal")["constant"]
    assert c is not None and math.isfinite(c)


@pytest.mark.parametrize(
    "args, code",
    [
        (["solve", "--mesh", "cube:3", "--data", "manufactured-1"], 0),
        (["check", "--mesh", "cube:2", "--rho", "one"], 2),
        (["basis", "--mesh", "shell:1,2,0", "--kind", "electric"], 0),
        (["friedrichs", "--mesh", "torus:2,0.5,0,cut", "--no-l2"], 0),
        (["solve", "--mesh", "missing.msh"], 4),
    ],
)
def test_cli_reports_match_schema(tmp_path, args, code):
    jsonschema = pytest.importorskip("jsonschema")
    assert divcurl.run_cli(args + ["--out", str(tmp_path)]) == code
    if code == 4:
        return
    report = json.loads((tmp_path / "report.json").read_text())
    jsonschema.validate(report, json.loads(SCHEMA.read_text()))
    assert report["command"] == args[0]
