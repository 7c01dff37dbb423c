import json

import pytest
from fastapi.testclient import TestClient

from timeline3d import io
from timeline3d.design import (
    ConvexArc,
    Faceted,
    LayoutSpec,
    Sequential,
    TimelineDesign,
    VerticalPlane,
)
from timeline3d.service import create_app


@pytest.fixture(scope="module")
def bench_client():
    from timeline3d.bench import GenConfig, generate

    dataset, _ = generate(GenConfig(time_point_count=40, seed=11))
    with TestClient(create_app(dataset)) as client:
        yield client


@pytest.fixture
def tree_client(fission_dataset):
    with TestClient(create_app(fission_dataset)) as client:
        yield client


def faceted_doc():
    design = TimelineDesign(
        scale=Sequential(unit_length=0.25),
        layout=LayoutSpec(faceting=Faceted(branch_count=2), branch_gap=0.5),
        representation=ConvexArc(center=(0.0, 0.0, 0.0), radius=4.0),
        support=VerticalPlane(),
    )
    return io.design_doc(design)


def new_session(client, body=None):
    resp = client.post("/session", json=body) if body is not None else client.post("/session")
    assert resp.status_code == 201, resp.text
    return resp.json()["id"]


class TestMeta:
    def test_dataset_meta(self, bench_client):
        doc = bench_client.get("/dataset/meta").json()
        assert doc["name"] == "synthetic-benchmark"
        assert doc["time_point_count"] == 40
        assert doc["snapshot_count"] == 240
        assert doc["extent"] > 1.0
        fields = {f["name"]: f["kind"] for f in doc["fields"]}
        assert fields == {"group": "categorical", "value": "numerical", "volume": "numerical"}

    def test_presets_listing(self, bench_client):
        doc = bench_client.get("/presets").json()
        names = {p["name"] for p in doc["presets"]}
        assert names == {"helicoid-unified", "curved-faceted", "no-timeline"}
        for entry in doc["presets"]:
            io.design_from_doc(entry["design"])


class TestSessionCreation:
    def test_empty_body_uses_default_preset(self, bench_client):
        sid = new_session(bench_client)
        state = bench_client.get(f"/session/{sid}/state").json()
        assert state["design"]["representation"]["kind"] == "helicoid"

    def test_named_preset(self, bench_client):
        sid = new_session(bench_client, {"preset": "no-timeline"})
        state = bench_client.get(f"/session/{sid}/state").json()
        assert state["design"]["representation"]["kind"] == "flat-line"

    def test_custom_design(self, bench_client):
        sid = new_session(bench_client, {"design": faceted_doc()})
        state = bench_client.get(f"/session/{sid}/state").json()
        assert state["design"]["layout"]["faceting"]["kind"] == "faceted"

    def test_explicit_central(self, bench_client):
        sid = new_session(bench_client, {"central": ["timeline", 7]})
        state = bench_client.get(f"/session/{sid}/state").json()
        assert state["central"] == ["timeline", 7]

    def test_ids_are_unique(self, bench_client):
        assert new_session(bench_client) != new_session(bench_client)

    @pytest.mark.parametrize(
        "body",
        [
            {"preset": "no-such"},
            {"preset": "no-timeline", "design": {}},
            {"bogus": 1},
            {"central": ["timeline", 999]},
            {"central": "timeline:0"},
            {"design": {"kind": "wat"}},
        ],
    )
    def test_invalid_bodies(self, bench_client, body):
        assert bench_client.post("/session", json=body).status_code == 422

    def test_malformed_json_body(self, bench_client):
        resp = bench_client.post(
            "/session", content=b"{nope", headers={"content-type": "application/json"}
        )
        assert resp.status_code == 400


class TestActions:
    def test_scroll_reports_changed(self, bench_client):
        sid = new_session(bench_client)
        resp = bench_client.post(f"/session/{sid}/action", json={"kind": "scroll", "delta": 3})
        assert resp.status_code == 200
        assert resp.json() == {"changed": ["central"]}
        assert bench_client.get(f"/session/{sid}/state").json()["central"] == ["timeline", 3]

    def test_noop_scroll_reports_empty(self, bench_client):
        sid = new_session(bench_client)
        resp = bench_client.post(f"/session/{sid}/action", json={"kind": "scroll", "delta": -5})
        assert resp.status_code == 200
        assert resp.json() == {"changed": []}

    def test_invalid_action_keeps_state(self, bench_client):
        sid = new_session(bench_client)
        before = bench_client.get(f"/session/{sid}/state").content
        resp = bench_client.post(
            f"/session/{sid}/action", json={"kind": "jump", "branch": "timeline", "index": 400}
        )
        assert resp.status_code == 422
        assert bench_client.get(f"/session/{sid}/state").content == before

    def test_malformed_action_rejected(self, bench_client):
        sid = new_session(bench_client)
        assert (
            bench_client.post(f"/session/{sid}/action", json={"kind": "warp"}).status_code == 422
        )
        resp = bench_client.post(
            f"/session/{sid}/action", content=b"][", headers={"content-type": "application/json"}
        )
        assert resp.status_code == 400

    def test_unknown_session_404(self, bench_client):
        assert bench_client.get("/session/zz/scene").status_code == 404
        assert bench_client.get("/session/zz/state").status_code == 404
        assert (
            bench_client.post("/session/zz/action", json={"kind": "scroll", "delta": 1}).status_code
            == 404
        )

    def test_sessions_are_isolated(self, bench_client):
        a = new_session(bench_client)
        b = new_session(bench_client)
        bench_client.post(f"/session/{a}/action", json={"kind": "scroll", "delta": 5})
        assert bench_client.get(f"/session/{b}/state").json()["central"] == ["timeline", 0]


class TestScene:
    def test_scene_schema(self, bench_client):
        sid = new_session(bench_client)
        doc = bench_client.get(f"/session/{sid}/scene").json()
        assert len(doc["placements"]) == 240
        assert doc["central"] == ["timeline", 0]

    def test_filter_round_trip(self, bench_client):
        sid = new_session(bench_client)
        resp = bench_client.post(
            f"/session/{sid}/action",
            json={"kind": "set-filter", "field": "value", "min": 1e9, "max": None},
        )
        assert resp.json() == {"changed": ["filters"]}
        doc = bench_client.get(f"/session/{sid}/scene").json()
        assert all(e["visibility"] == "filtered-out" for e in doc["placements"])

    def test_select_fission_parent_shows_three_branches(self, tree_client):
        sid = new_session(tree_client, {"design": faceted_doc()})
        resp = tree_client.post(
            f"/session/{sid}/action", json={"kind": "select-object", "id": "p"}
        )
        assert resp.status_code == 200
        doc = tree_client.get(f"/session/{sid}/scene").json()
        assert {e["branch"] for e in doc["placements"]} == {"p", "l1", "r1"}

    def test_scene_bytes_stable_across_reads(self, bench_client):
        sid = new_session(bench_client)
        first = bench_client.get(f"/session/{sid}/scene").content
        assert bench_client.get(f"/session/{sid}/scene").content == first


class TestReplay:
    LOG = [
        {"kind": "scroll", "delta": 4},
        {"kind": "set-filter", "field": "value", "min": 0.5, "max": None},
        {"kind": "set-color-field", "field": "value"},
        {"kind": "collapse", "branch": "timeline", "start": 10, "end": 19},
        {"kind": "set-lod", "stride": 2},
        {"kind": "rotate", "quaternion": [0.9950041652780258, 0.0, 0.09983341664682815, 0.0]},
        {"kind": "scale", "factor": 1.25},
        {"kind": "jump", "branch": "timeline", "index": 30},
    ]

    def test_action_log_replays_to_identical_scene(self, bench_client):
        first = new_session(bench_client)
        for action in self.LOG:
            resp = bench_client.post(f"/session/{first}/action", json=action)
            assert resp.status_code == 200, resp.text
        original = bench_client.get(f"/session/{first}/scene").content

        replayed = new_session(bench_client)
        for action in self.LOG:
            assert (
                bench_client.post(f"/session/{replayed}/action", json=action).status_code == 200
            )
        assert bench_client.get(f"/session/{replayed}/scene").content == original
        assert (
            bench_client.get(f"/session/{replayed}/state").content
            == bench_client.get(f"/session/{first}/state").content
        )

    def test_scene_content_reflects_log(self, bench_client):
        sid = new_session(bench_client)
        for action in self.LOG:
            bench_client.post(f"/session/{sid}/action", json=action)
        doc = bench_client.get(f"/session/{sid}/scene").json()
        assert doc["central"] == ["timeline", 30]
        gap = doc["gaps"][0]
        assert (gap["start"], gap["end"], gap["count"]) == (10, 19, 10)
        collapsed = {e["index"] for e in doc["placements"] if e["visibility"] == "collapsed"}
        assert collapsed == set(range(10, 20))
