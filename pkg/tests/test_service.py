"""HTTP service endpoints, exercised in process with a test client."""

from __future__ import annotations

import numpy as np
import pytest

fastapi = pytest.importorskip("fastapi")
from fastapi.testclient import TestClient  # noqa: E402

from foilmorph.geometry import similarity, to_coordinates  # noqa: E402
from foilmorph.morphing import morph  # noqa: E402
from foilmorph.service import create_app  # noqa: E402


@pytest.fixture(scope="module")
def client(baselines, catalog):
    return TestClient(create_app(catalog, baselines))


class TestBaselines:
    def test_twelve_names_in_fixed_order(self, client, baselines):
        data = client.get("/baselines").json()
        assert data["names"] == list(baselines.names)
        assert len(data["shapes"]) == 12

    def test_shapes_are_coordinate_pairs(self, client, baselines):
        data = client.get("/baselines").json()
        shape = np.asarray(data["shapes"][0])
        assert shape.shape == (baselines.F + 1, 2)
        np.testing.assert_allclose(
            shape, to_coordinates(baselines.shapes[0]), atol=1e-15
        )


class TestMorph:
    def test_one_hot_returns_the_baseline(self, client, baselines):
        weights = [0.0] * 12
        weights[4] = 1.0
        data = client.post("/morph", json={"weights": weights}).json()
        shape = np.asarray(data["shape"])
        np.testing.assert_array_equal(shape[:, 1], baselines.shapes[4])
        assert data["feasible"] is True
        assert data["repaired"] is False
        assert data["nearest"]["name"] == baselines.names[4]
        assert data["nearest"]["s_prime"] == 0.0

    def test_blend_matches_library(self, client, baselines):
        weights = [0.5, 0.5] + [0.0] * 10
        data = client.post("/morph", json={"weights": weights}).json()
        expected = morph(baselines, np.asarray(weights))
        np.testing.assert_allclose(
            np.asarray(data["shape"])[:, 1], expected, atol=1e-15
        )

    def test_wrong_weight_count_is_400(self, client):
        assert client.post("/morph", json={"weights": [1.0] * 5}).status_code == 400

    def test_degenerate_normalization_is_422(self, client):
        response = client.post("/morph", json={"weights": [0.0] * 12})
        assert response.status_code == 422
        assert response.json()["detail"] == "degenerate normalization"

    def test_nearest_is_consistent_with_similarity(self, client, baselines, catalog):
        weights = [0.3, 0.0, 0.7] + [0.0] * 9
        data = client.post("/morph", json={"weights": weights}).json()
        shape = np.asarray(data["shape"])[:, 1]
        scores = [similarity(shape, v) for v in catalog.vectors]
        assert data["nearest"]["name"] == catalog.names[int(np.argmin(scores))]
        assert data["nearest"]["s_prime"] == pytest.approx(min(scores), abs=1e-12)


class TestGenerate:
    def test_airdbm_via_knobs(self, client, baselines):
        knobs = [0.5] * 12
        knobs[3] = 1.0
        data = client.post(
            "/generate", json={"method": "airdbm", "knobs": knobs}
        ).json()
        np.testing.assert_array_equal(
            np.asarray(data["shape"])[:, 1], baselines.shapes[3]
        )
        assert data["repaired"] is True  # morphing path always repairs

    def test_parametric_method_via_dv(self, client):
        from .test_paramgen import FEASIBLE_DV

        data = client.post(
            "/generate", json={"method": "cst", "dv": FEASIBLE_DV["cst"].tolist()}
        ).json()
        assert data["feasible"] is True
        assert data["repaired"] is False

    def test_unknown_method_is_400(self, client):
        response = client.post("/generate", json={"method": "magic", "dv": [1.0]})
        assert response.status_code == 400

    def test_both_or_neither_inputs_are_400(self, client):
        assert (
            client.post("/generate", json={"method": "cst"}).status_code == 400
        )
        both = {"method": "cst", "dv": [0.1] * 12, "knobs": [0.5] * 12}
        assert client.post("/generate", json=both).status_code == 400

    def test_out_of_range_dv_is_400(self, client):
        from .test_paramgen import FEASIBLE_DV

        dv = FEASIBLE_DV["parsec"].tolist()
        dv[1] = 2.0  # crest position beyond the chord
        response = client.post("/generate", json={"method": "parsec", "dv": dv})
        assert response.status_code == 400

    def test_degenerate_weights_are_422(self, client):
        response = client.post(
            "/generate", json={"method": "airdbm", "dv": [0.0] * 12}
        )
        assert response.status_code == 422


class TestSimilarity:
    def test_by_name(self, client, catalog):
        a, b = catalog.names[0], catalog.names[1]
        data = client.post("/similarity", json={"a": a, "b": b}).json()
        assert data["s_prime"] == pytest.approx(
            similarity(catalog.get(a), catalog.get(b))
        )

    def test_inline_vectors(self, client, catalog):
        v = catalog.vectors[0].tolist()
        data = client.post("/similarity", json={"a": v, "b": v}).json()
        assert data["s_prime"] == 0.0

    def test_unknown_name_is_404(self, client, catalog):
        response = client.post(
            "/similarity", json={"a": "No Such Foil", "b": catalog.names[0]}
        )
        assert response.status_code == 404

    def test_length_mismatch_is_400(self, client, catalog):
        response = client.post(
            "/similarity", json={"a": [0.0] * 5, "b": catalog.names[0]}
        )
        assert response.status_code == 400


class TestCatalogEndpoint:
    def test_lookup(self, client, catalog):
        name = catalog.names[13]
        data = client.get(f"/catalog/{name}").json()
        assert data["name"] == name
        np.testing.assert_allclose(
            np.asarray(data["shape"])[:, 1], catalog.get(name), atol=1e-15
        )

    def test_unknown_is_404(self, client):
        assert client.get("/catalog/No Such Foil").status_code == 404


class TestDeterminism:
    def test_identical_requests_identical_responses(self, client):
        weights = [0.25] * 12
        a = client.post("/morph", json={"weights": weights}).json()
        b = client.post("/morph", json={"weights": weights}).json()
        assert a == b


class TestStatic:
    def test_static_mount_serves_index(self, baselines, catalog, tmp_path):
        (tmp_path / "index.html").write_text("<html>explorer</html>")
        app = create_app(catalog, baselines, static_dir=str(tmp_path))
        with TestClient(app) as static_client:
            response = static_client.get("/")
            assert response.status_code == 200
            assert "explorer" in response.text
            # API routes still win over the static mount
            assert static_client.get("/baselines").status_code == 200
