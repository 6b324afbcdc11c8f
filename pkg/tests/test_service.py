import numpy as np
import pytest
from fastapi.testclient import TestClient

from mvcage.service import create_app

SQUARE = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
BIG_SQUARE = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]]
CONCAVE = [[0.0, 0.0], [2.0, 0.0], [0.4, 0.5], [0.0, 2.0]]
CONVEX = [[0.0, 0.0], [2.0, 0.0], [2.2, 2.0], [-0.1, 1.9]]


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


class TestCoords:
    def test_square_center(self, client):
        r = client.post("/coords", json={"polygon": SQUARE, "point": [0.5, 0.5]})
        assert r.status_code == 200
        body = r.json()
        assert body["phi"] == pytest.approx([0.25] * 4)
        assert len(body["grad_phi"]) == 4

    def test_boundary_point(self, client):
        r = client.post("/coords", json={"polygon": SQUARE, "point": [0.5, 0.0]})
        assert r.status_code == 200
        body = r.json()
        assert body["phi"] == pytest.approx([0.5, 0.5, 0.0, 0.0])
        assert body["grad_phi"] is None

    def test_exterior_point_is_domain_error(self, client):
        r = client.post("/coords", json={"polygon": SQUARE, "point": [5.0, 5.0]})
        assert r.status_code == 200
        assert "error" in r.json()
        assert r.json()["error"]["type"] == "ExteriorPointError"

    def test_degenerate_polygon_is_domain_error(self, client):
        bowtie = [[0, 0], [1, 1], [1, 0], [0, 1]]
        r = client.post("/coords", json={"polygon": bowtie, "point": [0.5, 0.5]})
        assert r.status_code == 200
        assert r.json()["error"]["type"] == "DegeneratePolygonError"

    def test_schema_violation_is_422(self, client):
        r = client.post("/coords", json={"polygon": "nope", "point": [0, 0]})
        assert r.status_code == 422


class TestMap:
    def test_identity_echoes_points(self, client):
        pts = [[0.25, 0.25], [0.5, 0.75], [0.9, 0.1]]
        r = client.post(
            "/map", json={"source": SQUARE, "target": SQUARE, "points": pts}
        )
        assert r.status_code == 200
        out = np.asarray(r.json()["points"])
        assert np.abs(out - np.asarray(pts)).max() <= 1e-10

    def test_scaling(self, client):
        r = client.post(
            "/map",
            json={"source": SQUARE, "target": BIG_SQUARE, "points": [[0.5, 0.5]]},
        )
        assert r.json()["points"][0] == pytest.approx([1.0, 1.0])

    def test_exterior_point_reported(self, client):
        r = client.post(
            "/map", json={"source": SQUARE, "target": SQUARE, "points": [[9, 9]]}
        )
        assert r.status_code == 200
        assert r.json()["error"]["type"] == "DeformationError"


class TestField:
    def test_identity_grid(self, client):
        r = client.post(
            "/field", json={"source": SQUARE, "target": SQUARE, "res": [9, 9]}
        )
        assert r.status_code == 200
        body = r.json()
        assert len(body["grid"]) == 9
        vals = [v for row in body["grid"] for v in row if v is not None]
        assert vals == pytest.approx([1.0] * len(vals))
        assert body["min"] == pytest.approx(1.0)
        assert body["bbox"] == [0.0, 0.0, 1.0, 1.0]

    def test_absent_cells_are_null(self, client):
        r = client.post(
            "/field", json={"source": CONCAVE, "target": CONCAVE, "res": [21, 21]}
        )
        grid = r.json()["grid"]
        assert any(v is None for row in grid for v in row)


class TestCheck:
    def test_concave_to_convex_is_injective_evidence(self, client):
        r = client.post(
            "/check", json={"source": CONCAVE, "target": CONVEX, "res": [80, 80]}
        )
        assert r.status_code == 200
        assert r.json()["verdict"] == "injective-evidence"

    def test_convex_to_concave_is_non_injective(self, client):
        r = client.post(
            "/check", json={"source": CONVEX, "target": CONCAVE, "res": [120, 120]}
        )
        body = r.json()
        assert body["verdict"] == "non-injective"
        assert body["negative_sample_count"] > 0

    def test_stateless_identical_responses(self, client):
        payload = {"source": SQUARE, "target": BIG_SQUARE, "res": [33, 17]}
        a = client.post("/field", json=payload)
        b = client.post("/field", json=payload)
        assert a.json() == b.json()
