"""Edit-service tests: session lifecycle, atomicity, persistence, HTTP/WS."""

import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from pcg.extract import build_pcg, extract_hierarchy, load_hierarchy
from pcg.fixtures import TABLE_PCG, chair_hierarchy
from pcg.kernel import EvalError, decode_frame, evaluate, import_obj, meshes_equal
from pcg.lang import parse_pcg, print_pcg
from pcg.llm import LlmEndpointConfig, ReplayStore, build_edit_prompt, build_generation_prompt
from pcg.service import ParamDelta, RejectedEdit, SessionManager, create_app


def chair_pcg_text() -> str:
    return print_pcg(build_pcg(load_hierarchy(chair_hierarchy())))


def armless_chair_text() -> str:
    return chair_pcg_text().replace("input has_armrest: bool = true",
                                    "input has_armrest: bool = false")


def manager_with_replay(tmp_path, **kwargs) -> SessionManager:
    replay_dir = str(tmp_path / "llm")
    config = LlmEndpointConfig(replay_dir=replay_dir, replay=True)
    return SessionManager(llm_config=config, **kwargs)


class TestSessionLifecycle:
    def test_create_from_pcg(self):
        m = SessionManager()
        s = m.create_from_pcg(TABLE_PCG)
        assert s.revision == 0
        assert s.mesh().num_triangles > 0
        state = s.state()
        assert parse_pcg(state["pcg"]).ok
        assert [p["name"] for p in state["params"]][:2] == ["table_width",
                                                            "table_length"]

    def test_invalid_pcg_rejected_with_diagnostics(self):
        m = SessionManager()
        with pytest.raises(RejectedEdit) as e:
            m.create_from_pcg("c = conjure()\noutput = c\n")
        assert e.value.diagnostics[0].line == 1
        assert not m.sessions

    def test_create_from_instruction_replayed(self, tmp_path):
        m = manager_with_replay(tmp_path)
        prompt = build_generation_prompt("Generate an office chair with wheels", [])
        ReplayStore(m.llm_config.replay_dir).put(
            prompt.text,
            "Here you go:\n```\n" + chair_pcg_text() + "```\n")
        s = m.create_from_instruction("Generate an office chair with wheels")
        assert s.mesh().num_triangles > 0
        assert parse_pcg(s.pcg_text).ok

    def test_generation_failure_creates_no_session(self, tmp_path):
        m = manager_with_replay(tmp_path)
        prompt = build_generation_prompt("nonsense request", [])
        ReplayStore(m.llm_config.replay_dir).put(prompt.text, "I cannot do that.")
        with pytest.raises(RejectedEdit) as e:
            m.create_from_instruction("nonsense request")
        assert e.value.raw_response == "I cannot do that."
        assert not m.sessions


class TestParamDeltas:
    def test_leg_height_changes_only_leg_vertices(self):
        m = SessionManager()
        s = m.create_from_pcg(TABLE_PCG)
        m0 = s.mesh()
        m.apply_param(s.id, ParamDelta("leg_height", 3.0))
        m1 = s.mesh()
        assert s.revision == 1

        def verts_for(mesh, name):
            tag = [k for k, v in mesh.tag_names.items() if v == name][0]
            return mesh.vertices[np.unique(mesh.triangles[mesh.part_tags == tag])]

        assert np.array_equal(verts_for(m0, "top"), verts_for(m1, "top"))
        assert not np.array_equal(verts_for(m0, "leg"), verts_for(m1, "leg"))

    def test_out_of_range_rejected_atomically(self):
        m = SessionManager()
        s = m.create_from_pcg(TABLE_PCG)
        before = s.mesh()
        with pytest.raises(EvalError) as e:
            m.apply_param(s.id, ParamDelta("leg_height", 99.0))
        assert e.value.code == "RangeError"
        assert s.revision == 0
        assert meshes_equal(s.mesh(), before)

    def test_thousand_sequential_deltas_match_fresh_evaluate(self, table_graph):
        import random

        m = SessionManager()
        s = m.create_from_pcg(TABLE_PCG)
        rng = random.Random(9)
        values = {}
        for i in range(1000):
            p = rng.choice(table_graph.params)
            lo, hi = p.range
            value = round(rng.uniform(lo, hi), 4)
            m.apply_param(s.id, ParamDelta(p.name, value))
            values[p.name] = value
        assert s.revision == 1000  # one increment per successful mutation
        assert meshes_equal(s.mesh(), evaluate(table_graph, values))


class TestTextEdits:
    def test_remove_the_arms_replay(self, tmp_path):
        m = manager_with_replay(tmp_path)
        s = m.create_from_pcg(chair_pcg_text())
        prompt = build_edit_prompt(s.graph, "Remove the arms")
        ReplayStore(m.llm_config.replay_dir).put(
            prompt, "```\n" + armless_chair_text() + "```")
        before_tags = {s.mesh().tag_names[t] for t in np.unique(s.mesh().part_tags)}
        m.apply_text_edit(s.id, "Remove the arms")
        after = s.mesh()
        after_tags = {after.tag_names[t] for t in np.unique(after.part_tags)}
        removed = before_tags - after_tags
        assert removed and all("arm" in t for t in removed)
        state = s.state()
        flag = [p for p in state["params"] if p["name"] == "has_armrest"][0]
        assert flag["value"] is False
        assert s.revision == 1

    def test_user_sliders_survive_edit(self, tmp_path):
        m = manager_with_replay(tmp_path)
        s = m.create_from_pcg(chair_pcg_text())
        m.apply_param(s.id, ParamDelta("base_scale_z", 2.0))
        prompt = build_edit_prompt(s.graph, "Remove the arms")
        ReplayStore(m.llm_config.replay_dir).put(
            prompt, "```\n" + armless_chair_text() + "```")
        m.apply_text_edit(s.id, "Remove the arms")
        state = {p["name"]: p["value"] for p in s.state()["params"]}
        assert state["base_scale_z"] == 2.0
        assert state["has_armrest"] is False

    def test_garbage_response_leaves_session_unchanged(self, tmp_path):
        m = manager_with_replay(tmp_path)
        s = m.create_from_pcg(TABLE_PCG)
        prompt = build_edit_prompt(s.graph, "do something weird")
        ReplayStore(m.llm_config.replay_dir).put(prompt, "no graphs today")
        before = s.mesh()
        with pytest.raises(RejectedEdit) as e:
            m.apply_text_edit(s.id, "do something weird")
        assert e.value.raw_response == "no graphs today"
        assert s.revision == 0
        assert meshes_equal(s.mesh(), before)
        assert print_pcg(s.graph) == print_pcg(parse_pcg(TABLE_PCG).graph)

    def test_edit_changing_only_a_default_equals_apply_param(self, tmp_path):
        m = manager_with_replay(tmp_path)
        a = m.create_from_pcg(TABLE_PCG)
        b = m.create_from_pcg(TABLE_PCG)
        edited = TABLE_PCG.replace("input leg_height: float = 2.0",
                                   "input leg_height: float = 3.0")
        prompt = build_edit_prompt(a.graph, "make the legs taller")
        ReplayStore(m.llm_config.replay_dir).put(prompt, "```\n" + edited + "```")
        m.apply_text_edit(a.id, "make the legs taller")
        m.apply_param(b.id, ParamDelta("leg_height", 3.0))
        assert meshes_equal(a.mesh(), b.mesh())


class TestPersistence:
    def test_save_restart_load(self, tmp_path):
        data = str(tmp_path / "data")
        m1 = SessionManager(data_dir=data)
        s = m1.create_from_pcg(TABLE_PCG)
        m1.apply_param(s.id, ParamDelta("leg_height", 2.5))
        m1.apply_param(s.id, ParamDelta("table_width", 1.1))
        state1 = s.state()

        m2 = SessionManager(data_dir=data)
        assert set(m2.sessions) == {s.id}
        state2 = m2.get(s.id).state()
        assert state1 == state2
        assert meshes_equal(m2.get(s.id).mesh(), s.mesh())

    def test_edit_events_replay(self, tmp_path):
        data = str(tmp_path / "data")
        replay_dir = str(tmp_path / "llm")
        config = LlmEndpointConfig(replay_dir=replay_dir, replay=True)
        m1 = SessionManager(data_dir=data, llm_config=config)
        s = m1.create_from_pcg(chair_pcg_text())
        prompt = build_edit_prompt(s.graph, "Remove the arms")
        ReplayStore(replay_dir).put(prompt, "```\n" + armless_chair_text() + "```")
        m1.apply_text_edit(s.id, "Remove the arms")

        m2 = SessionManager(data_dir=data)  # no LLM needed for replay
        assert m2.get(s.id).state() == s.state()

    def test_empty_store(self, tmp_path):
        m = SessionManager(data_dir=str(tmp_path / "nothing"))
        assert m.sessions == {}

    def test_corrupt_log_skipped_others_loaded(self, tmp_path):
        data = tmp_path / "data"
        m1 = SessionManager(data_dir=str(data))
        good = m1.create_from_pcg(TABLE_PCG)
        bad = m1.create_from_pcg(TABLE_PCG)
        log = data / f"{bad.id}.jsonl"
        log.write_text(log.read_text()[:25])  # truncate mid-record

        m2 = SessionManager(data_dir=str(data))
        assert set(m2.sessions) == {good.id}


@pytest.fixture()
def client(tmp_path):
    replay_dir = str(tmp_path / "llm")
    manager = SessionManager(
        llm_config=LlmEndpointConfig(replay_dir=replay_dir, replay=True))
    app = create_app(manager)
    with TestClient(app) as c:
        c.manager = manager
        yield c


class TestHttpApi:
    def test_create_and_get(self, client):
        r = client.post("/sessions", json={"pcg": TABLE_PCG})
        assert r.status_code == 200
        body = r.json()
        assert body["revision"] == 0
        assert len(body["params"]) == 4
        sid = body["session_id"]
        assert client.get(f"/sessions/{sid}").json() == body

    def test_create_requires_exactly_one_source(self, client):
        assert client.post("/sessions", json={}).status_code == 400
        assert client.post("/sessions", json={
            "pcg": TABLE_PCG, "instruction": "x"}).status_code == 400

    def test_invalid_pcg_is_422_with_line_numbers(self, client):
        r = client.post("/sessions", json={"pcg": "c = conjure()\noutput = c\n"})
        assert r.status_code == 422
        detail = r.json()["detail"]
        assert detail["diagnostics"][0]["line"] == 1
        assert detail["diagnostics"][0]["code"] == "UnknownNodeKind"

    def test_patch_param_and_revision(self, client):
        sid = client.post("/sessions", json={"pcg": TABLE_PCG}).json()["session_id"]
        r = client.patch(f"/sessions/{sid}/params",
                         json={"name": "leg_height", "value": 3.0})
        assert r.status_code == 200
        assert r.json()["revision"] == 1
        values = {p["name"]: p["value"] for p in r.json()["params"]}
        assert values["leg_height"] == 3.0

    def test_patch_out_of_range_is_422(self, client):
        sid = client.post("/sessions", json={"pcg": TABLE_PCG}).json()["session_id"]
        r = client.patch(f"/sessions/{sid}/params",
                         json={"name": "leg_height", "value": 99.0})
        assert r.status_code == 422
        assert client.get(f"/sessions/{sid}").json()["revision"] == 0

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/zzz").status_code == 404
        assert client.patch("/sessions/zzz/params",
                            json={"name": "x", "value": 1}).status_code == 404

    def test_mesh_obj_endpoint(self, client, table_graph):
        sid = client.post("/sessions", json={"pcg": TABLE_PCG}).json()["session_id"]
        r = client.get(f"/sessions/{sid}/mesh.obj")
        assert r.status_code == 200
        mesh = import_obj(r.text)
        want = evaluate(table_graph)
        assert mesh.num_vertices == want.num_vertices
        assert np.allclose(mesh.vertices, want.vertices, rtol=1e-8, atol=1e-12)

    def test_edit_endpoint_replay(self, client):
        text = chair_pcg_text()
        sid = client.post("/sessions", json={"pcg": text}).json()["session_id"]
        graph = parse_pcg(text).graph
        prompt = build_edit_prompt(graph, "Remove the arms")
        ReplayStore(client.manager.llm_config.replay_dir).put(
            prompt, "```\n" + armless_chair_text() + "```")
        r = client.post(f"/sessions/{sid}/edits",
                        json={"instruction": "Remove the arms"})
        assert r.status_code == 200
        assert r.json()["revision"] == 1
        values = {p["name"]: p["value"] for p in r.json()["params"]}
        assert values["has_armrest"] is False

    def test_failed_edit_is_422_with_raw(self, client):
        sid = client.post("/sessions", json={"pcg": TABLE_PCG}).json()["session_id"]
        graph = parse_pcg(TABLE_PCG).graph
        prompt = build_edit_prompt(graph, "explode")
        ReplayStore(client.manager.llm_config.replay_dir).put(prompt, "kaboom")
        r = client.post(f"/sessions/{sid}/edits", json={"instruction": "explode"})
        assert r.status_code == 422
        assert r.json()["detail"]["raw_response"] == "kaboom"
        assert client.get(f"/sessions/{sid}").json()["revision"] == 0


def test_broadcaster_slow_subscriber_gets_latest_only():
    import asyncio

    from pcg.service.app import _Broadcaster

    async def run():
        b = _Broadcaster()
        slow = b.subscribe("s")
        for rev in range(5):
            b.publish("s", {"revision": rev})
        first = await slow.get()
        assert first["revision"] == 4  # intermediates dropped
        assert slow.empty()
        b.unsubscribe("s", slow)
        b.publish("s", {"revision": 5})  # no subscribers; no error

    asyncio.run(run())


class TestWebSocket:
    def test_stream_initial_and_updates(self, client, table_graph):
        sid = client.post("/sessions", json={"pcg": TABLE_PCG}).json()["session_id"]
        with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
            control = ws.receive_json()
            assert control["revision"] == 0
            frame = decode_frame(ws.receive_bytes())
            want = evaluate(table_graph)
            assert frame.num_vertices == want.num_vertices
            assert np.array_equal(frame.triangles, want.triangles)

            client.patch(f"/sessions/{sid}/params",
                         json={"name": "leg_height", "value": 3.0})
            control = ws.receive_json()
            assert control["revision"] == 1
            frame2 = decode_frame(ws.receive_bytes())
            assert not np.array_equal(frame.vertices, frame2.vertices)

    def test_unknown_session_closes(self, client):
        with pytest.raises(Exception):
            with client.websocket_connect("/sessions/nope/stream") as ws:
                ws.receive_json()
