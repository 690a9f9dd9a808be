import math

import pytest


class TestHealth:
    def test_health(self, client):
        assert client.get("/health").json() == {"status": "ok"}


class TestEnergyEndpoint:
    def test_single_point(self, client):
        resp = client.post("/energy", json={"N": 8, "J": 1.0, "B": 0.6, "r": 0})
        assert resp.status_code == 200
        body = resp.json()
        assert body["schemaVersion"] == 1
        assert body["rows"] == [{"r": 0, "B": 0.6, "energy": -4.8}]

    def test_sector_sweep(self, client):
        resp = client.post(
            "/energy",
            json={"N": 8, "J": 1.0, "B": 0.6, "r_range": {"start": 0, "stop": 4}},
        )
        rows = resp.json()["rows"]
        assert [row["r"] for row in rows] == [0, 1, 2, 3, 4]
        assert rows[1]["energy"] == pytest.approx(-4.6)

    def test_field_range(self, client):
        resp = client.post(
            "/energy",
            json={
                "N": 4,
                "B": None,
                "b_range": {"start": 0.0, "stop": 1.0, "steps": 5},
                "r": 2,
            },
        )
        rows = resp.json()["rows"]
        assert len(rows) == 5
        assert rows[0]["energy"] == pytest.approx(-math.sqrt(2))

    def test_auto_grid_hits_every_interval(self, client):
        resp = client.post("/energy", json={"N": 8, "auto_grid": True, "r": 0})
        assert len(resp.json()["rows"]) == 5  # one midpoint per interval

    def test_invalid_sector_is_422(self, client):
        resp = client.post("/energy", json={"N": 8, "B": 0.1, "r": 5})
        assert resp.status_code == 422
        assert resp.json()["detail"]["errorType"] == "ValidationError"

    def test_missing_field_spec_is_422(self, client):
        resp = client.post("/energy", json={"N": 8, "r": 1})
        assert resp.status_code == 422


class TestPhaseDiagramEndpoint:
    def test_n8(self, client):
        body = client.post("/phase-diagram", json={"N": 8}).json()
        fields = body["criticalFields"]
        assert len(fields) == 4
        assert fields[0] == 0.5
        assert all(a > b for a, b in zip(fields, fields[1:]))
        assert body["derivativeJumps"] == [2.0] * 4
        assert [iv["r"] for iv in body["intervals"]] == [0, 1, 2, 3, 4]
        assert body["intervals"][0]["bHigh"] is None

    def test_plot_rows_are_consistent(self, client):
        body = client.post("/phase-diagram", json={"N": 6, "samples_per_interval": 4}).json()
        for row in body["plot"]:
            assert row["dEdB"] == -(6 - 2 * row["r"])

    def test_n2_single_transition(self, client):
        body = client.post("/phase-diagram", json={"N": 2}).json()
        assert body["criticalFields"] == [0.5]


class TestSchmidtEndpoint:
    def test_n10_r3(self, client):
        body = client.post("/schmidt", json={"N": 10, "r": 3}).json()
        assert body["M"] == 5
        report = body["reports"][0]
        assert report["totalRank"] == 8
        assert [blk["rank"] for blk in report["blocks"]] == [1, 3, 3, 1]
        assert report["reliable"] is True

    def test_default_sweeps_all_sectors(self, client):
        body = client.post("/schmidt", json={"N": 6}).json()
        assert [rep["r"] for rep in body["reports"]] == [0, 1, 2, 3]
        assert [rep["totalRank"] for rep in body["reports"]] == [1, 2, 4, 8]


class TestClassifyEndpoint:
    def test_n8_headline(self, client):
        body = client.post("/classify", json={"N": 8}).json()
        pairs = [(t["rankAbove"], t["rankBelow"]) for t in body["transitions"]]
        assert pairs == [(1, 2), (2, 4), (4, 8), (8, 16)]
        assert all(t["verdict"] == "INEQUIVALENT" for t in body["transitions"])
        assert body["transitions"][0]["criticalField"] == 0.5

    def test_n5(self, client):
        body = client.post("/classify", json={"N": 5}).json()
        pairs = [(t["rankAbove"], t["rankBelow"]) for t in body["transitions"]]
        assert pairs == [(1, 2), (2, 4)]


class TestVerifyEndpoint:
    def test_n6_all_pass(self, client):
        body = client.post("/verify", json={"N": 6}).json()
        assert body["allPassed"] is True
        assert {c["name"] for c in body["checks"]} == {
            "energy",
            "overlap",
            "rank",
            "recurrence",
        }

    def test_oracle_capacity_is_422(self, client):
        resp = client.post("/verify", json={"N": 30})
        assert resp.status_code == 422
        assert resp.json()["detail"]["errorType"] == "CapacityError"


class TestStateEndpoint:
    def test_two_site(self, client):
        body = client.post("/state", json={"N": 2, "r": 1}).json()
        assert body["entries"] == [[1, 1.0], [2, 1.0]]
        assert body["normConstant"] == pytest.approx(1 / math.sqrt(2))

    def test_invalid_sector(self, client):
        assert client.post("/state", json={"N": 4, "r": 3}).status_code == 422
