import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from conftest import random_concave_quad, random_convex_quad
from mvcage.cli import main
from mvcage.geometry import Polygon
from mvcage.scene import Scene, SceneOptions, read_scene, scene_to_json, write_scene

SVG_NS = "{http://www.w3.org/2000/svg}"


def circle_curve(center, radius, samples=64):
    th = np.linspace(0, 2 * np.pi, samples, endpoint=False)
    return center + radius * np.column_stack((np.cos(th), np.sin(th)))


@pytest.fixture
def identity_scene(tmp_path, unit_square):
    scene = Scene(
        source=unit_square,
        target=unit_square,
        payload=circle_curve(np.array([0.5, 0.5]), 0.3),
        options=SceneOptions(resolution=(40, 40)),
    )
    path = tmp_path / "identity.json"
    write_scene(scene, path)
    return path


@pytest.fixture
def folding_scene(tmp_path, rng):
    # convex source, decisively concave target: the classic failing direction
    scene = Scene(
        source=Polygon([(0.0, 0.0), (2.0, 0.0), (2.2, 2.0), (-0.1, 1.9)]),
        target=Polygon([(0.0, 0.0), (2.0, 0.0), (0.4, 0.5), (0.0, 2.0)]),
        options=SceneOptions(resolution=(150, 150)),
    )
    path = tmp_path / "folding.json"
    write_scene(scene, path)
    return path


class TestSceneRoundTrip:
    def test_bit_exact(self, tmp_path, rng):
        src = random_convex_quad(rng)
        dst = random_concave_quad(rng)
        payload = rng.normal(size=(17, 2)) * 1e-3 + src.vertices.mean(axis=0)
        scene = Scene(
            source=src,
            target=dst,
            payload=payload,
            options=SceneOptions(resolution=(30, 40), tolerance=1.25e-9),
        )
        path = tmp_path / "s.json"
        write_scene(scene, path)
        back = read_scene(path)
        assert np.array_equal(back.source.vertices, src.vertices)
        assert np.array_equal(back.target.vertices, dst.vertices)
        assert np.array_equal(back.payload, payload)
        assert back.options.resolution == (30, 40)
        assert back.options.tolerance == 1.25e-9

    def test_seventeen_digit_floats(self, unit_square):
        v = 0.1 + 0.2  # 0.30000000000000004
        scene = Scene(
            source=Polygon([(0, 0), (1, 0), (v, 1)]),
            target=Polygon([(0, 0), (1, 0), (0.5, 1)]),
        )
        text = scene_to_json(scene)
        assert "0.30000000000000004" in text

    def test_parse_error_has_line(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{\n  "source_polygon": [[0, 0], [1]\n}')
        code = main(["coords", str(bad), "--at", "0.5,0.5"])
        assert code == 1

    def test_missing_polygon_rejected(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"source_polygon": [[0,0],[1,0],[0,1]]}')
        assert main(["check", str(bad)]) == 1

    def test_degenerate_polygon_rejected(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(
            json.dumps(
                {
                    "source_polygon": [[0, 0], [1, 1], [1, 0], [0, 1]],
                    "target_polygon": [[0, 0], [1, 0], [1, 1], [0, 1]],
                }
            )
        )
        assert main(["check", str(bad)]) == 1


class TestCheckCommand:
    def test_identity_exits_zero(self, identity_scene, capsys):
        assert main(["check", str(identity_scene)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["verdict"] == "injective-evidence"
        assert report["min_jacobian"] == pytest.approx(1.0, abs=1e-9)

    def test_folding_exits_two_with_witness(self, folding_scene, capsys):
        assert main(["check", str(folding_scene)]) == 2
        report = json.loads(capsys.readouterr().out)
        assert report["verdict"] == "non-injective"
        assert report["negative_sample_count"] > 0
        assert report["argmin_location"] is not None


class TestCoordsCommand:
    def test_square_center(self, identity_scene, capsys):
        assert main(["coords", str(identity_scene), "--at", "0.5,0.5"]) == 0
        body = json.loads(capsys.readouterr().out)
        assert body["phi"] == pytest.approx([0.25] * 4)
        assert len(body["grad_phi"]) == 4

    def test_boundary_point_has_no_gradients(self, identity_scene, capsys):
        assert main(["coords", str(identity_scene), "--at", "0.5,0"]) == 0
        body = json.loads(capsys.readouterr().out)
        assert body["phi"] == pytest.approx([0.5, 0.5, 0, 0])
        assert body["grad_phi"] is None

    def test_exterior_point_errors(self, identity_scene):
        assert main(["coords", str(identity_scene), "--at", "9,9"]) == 1


class TestMapFieldCommands:
    def test_map_identity(self, identity_scene, capsys):
        assert main(["map", str(identity_scene)]) == 0
        pts = np.asarray(json.loads(capsys.readouterr().out)["points"])
        expect = circle_curve(np.array([0.5, 0.5]), 0.3)
        assert np.abs(pts - expect).max() <= 1e-10

    def test_field_json(self, identity_scene, capsys):
        assert main(["field", str(identity_scene), "--res", "9x7", "--format", "json"]) == 0
        body = json.loads(capsys.readouterr().out)
        grid = body["grid"]
        assert len(grid) == 9 and len(grid[0]) == 7
        vals = [v for row in grid for v in row if v is not None]
        assert vals == pytest.approx([1.0] * len(vals))

    def test_field_text(self, identity_scene, capsys):
        assert main(["field", str(identity_scene), "--res", "5x5"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 5 and len(lines[0].split()) == 5


class TestSearchCommand:
    def test_search_writes_checkable_scene(self, tmp_path, capsys):
        out = tmp_path / "counterexample.json"
        assert main(["search", "--n", "5", "--trials", "20000", "--seed", "1",
                     "--out", str(out)]) == 0
        capsys.readouterr()
        assert main(["check", str(out)]) == 2

    def test_search_rerun_identical(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["search", "--n", "5", "--trials", "3000", "--seed", "2", "--out", str(a)]) == 0
        assert main(["search", "--n", "5", "--trials", "3000", "--seed", "2", "--out", str(b)]) == 0
        capsys.readouterr()
        assert a.read_text() == b.read_text()
        # parse -> serialize is a fixed point: the stored decimals are exact
        from mvcage.scene import scene_to_json

        assert scene_to_json(read_scene(a)) == a.read_text()

    def test_search_rejects_quads(self, capsys):
        assert main(["search", "--n", "4", "--trials", "10", "--seed", "0"]) == 1


class TestFigureCommand:
    def _check_svg(self, path, payload_samples):
        tree = ET.parse(path)  # well-formed XML
        root = tree.getroot()
        paths = root.findall(f".//{SVG_NS}path")
        assert len(paths) == 4  # two cages + payload + image
        image_path = paths[-1]
        # node count equals payload sample count
        nodes = image_path.get("d").count(",")
        assert nodes == payload_samples

    def test_identity_figure(self, identity_scene, tmp_path, capsys):
        out = tmp_path / "fig.svg"
        assert main(["figure", str(identity_scene), "--out", str(out)]) == 0
        self._check_svg(out, 64)

    def test_requires_out(self, identity_scene):
        with pytest.raises(SystemExit):
            main(["figure", str(identity_scene)])
