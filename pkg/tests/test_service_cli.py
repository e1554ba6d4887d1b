import json

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from cyclab import service, suite
from cyclab.cli import main
from cyclab.foundation import canonical_json
from cyclab.serve import create_app

LADDER_WORD = "0,1,0,1"

TRIM = {
    "max_word_length": 2,
    "random_words": 2,
    "random_word_length": 4,
    "chain_length": 2,
    "ideal_max_length": 1,
    "ideal_count": 4,
    "samples": 3,
    "w4_depth": 1,
    "w4_nodes": 3,
}


def run_cli(args, stdin=None):
    return CliRunner().invoke(main, args, input=stdin)


# -- service layer


def test_parse_word_forms():
    assert service.parse_word("0,1, 0,1") == (0, 1, 0, 1)
    assert service.parse_word([0, 1]) == (0, 1)
    assert service.parse_word(()) == ()
    with pytest.raises(ValueError):
        service.parse_word("0,x")


def test_named_graph_error_lists_choices():
    with pytest.raises(ValueError) as err:
        service.named_graph("nope")
    assert "kronecker" in str(err.value)


def test_coxeter_endpoints():
    assert service.coxeter_reduce("a2", "1,2,1") == {
        "word": [1, 2, 1],
        "reduced": True,
        "length": 3,
    }
    assert service.coxeter_longest("a2") == {"word": [1, 2, 1], "length": 3}
    assert service.coxeter_words("a2", 2) == {
        "length": 2,
        "words": [[1, 2], [2, 1]],
    }
    assert service.coxeter_rewrites("triangle", "1,2,1")["words"] == [
        [1, 2, 1],
        [2, 1, 2],
    ]


def test_quiver_from_word_and_vertex_coercion():
    q = service.quiver_from_word("kronecker", LADDER_WORD)
    assert {a["from"]: a for a in q["arrows"]}[1]["mult"] == 2
    mutated = service.quiver_mutate(q, "1")  # string label coerced
    assert mutated == service.quiver_mutate(q, 1)
    with pytest.raises(ValueError):
        service.quiver_mutate(q, 9)


def test_seed_mutation_relation_text():
    out = service.seed_mutate(service.loopgroup_seed("w3"), 1)
    rel = out["relation"]
    assert rel["before"] == "d1"
    assert rel["text"] == "(d1) * (d1^-1*d3 + d1^-1*d2^2) = (d3) + (d2^2)"


def test_seed_explore_and_type():
    g = service.seed_explore(service.loopgroup_seed("w3"))
    assert len(g["nodes"]) == 2 and g["complete"]
    assert g["edges"] == [{"from": 0, "to": 1, "vertex": "1"}]
    a2 = service.seed_initial(
        {
            "vertices": [{"id": 1, "frozen": False}, {"id": 2, "frozen": False}],
            "arrows": [{"from": 1, "to": 2, "mult": 1}],
        }
    )
    assert service.seed_type(a2) == {
        "kind": "finite",
        "name": "A2",
        "clusters": 5,
        "variables": 5,
    }


def test_preproj_chain_values():
    out = service.preproj_chain("kronecker", LADDER_WORD, 6)
    assert out["ideal_dims"] == [41, 38, 33, 26]
    assert out["quotient_dims"] == [1, 4, 9, 16]


def test_export_is_byte_stable():
    seed = service.loopgroup_seed("w4")
    once = service.export_entity("seed", "json", seed)
    again = service.export_entity("seed", "json", seed)
    assert once == again == canonical_json(json.loads(once))
    q = service.quiver_from_word("kronecker", LADDER_WORD)
    dot = service.export_entity("quiver", "dot", q)
    assert "digraph" in dot and "box" in dot
    with pytest.raises(ValueError):
        service.export_entity("module", "dot", None)


# -- command line


def test_cli_word2quiver_byte_stable():
    a = run_cli(["word2quiver", "kronecker", LADDER_WORD])
    b = run_cli(["word2quiver", "kronecker", LADDER_WORD])
    assert a.exit_code == 0
    assert a.output == b.output
    assert a.output == canonical_json(service.quiver_from_word("kronecker", LADDER_WORD))


def test_cli_quiver_mutate_from_stdin():
    q = run_cli(["word2quiver", "kronecker", LADDER_WORD]).output
    out = run_cli(["quiver", "mutate", "1", "--quiver", "-"], stdin=q)
    assert out.exit_code == 0
    assert out.output == canonical_json(service.quiver_mutate(json.loads(q), 1))


def test_cli_cluster_pipeline():
    seed = run_cli(["loopgroup", "seed", "w3"]).output
    out = run_cli(["cluster", "mutate", "1", "--seed", "-"], stdin=seed)
    assert out.exit_code == 0
    assert out.output == canonical_json(service.seed_mutate(json.loads(seed), 1))


def test_cli_not_reduced_is_an_error():
    out = run_cli(["word2quiver", "a2", "1,1"])
    assert out.exit_code == 1
    assert "not_reduced" in out.output


def test_cli_missing_file_is_usage_error():
    out = run_cli(["cluster", "mutate", "1", "--seed", "/no/such/file.json"])
    assert out.exit_code == 2


def test_cli_bad_embedding_json():
    out = run_cli(
        ["cluster", "subcheck", "--sub", "-", "--ambient", "-", "--embedding", "{"]
    )
    assert out.exit_code == 2


def test_cli_loopgroup_verify_exit_codes(tmp_path):
    out = run_cli(["--rng", "7", "loopgroup", "verify", "w3", "--samples", "3"])
    assert out.exit_code == 0
    assert json.loads(out.output)["all_passed"] is True


def test_cli_verify_trimmed_config(tmp_path):
    cfg = tmp_path / "trim.json"
    cfg.write_text(json.dumps(TRIM))
    out = run_cli(["verify", str(cfg)])
    assert out.exit_code == 0, out.output
    assert "all checks passed" in out.output
    assert out.output.count("ok  ") == len(suite.CHECKS)


def test_cli_verify_failing_config(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps(dict(TRIM, ideal_count=99)))
    out = run_cli(["verify", str(cfg)])
    assert out.exit_code == 1
    assert "FAIL ideal_distinctness" in out.output


def test_cli_verify_rejects_non_object_config(tmp_path):
    cfg = tmp_path / "list.json"
    cfg.write_text("[1, 2]")
    assert run_cli(["verify", str(cfg)]).exit_code == 2


def test_cli_export_round_trip(tmp_path):
    seed = run_cli(["loopgroup", "seed", "w4"]).output
    once = run_cli(["export", "--kind", "seed", "--in", "-"], stdin=seed)
    again = run_cli(["export", "--kind", "seed", "--in", "-"], stdin=seed)
    assert once.exit_code == 0 and once.output == again.output
    graph = run_cli(
        ["cluster", "explore", "--seed", "-", "--depth", "2"], stdin=seed
    ).output
    dot = run_cli(
        ["export", "--kind", "exchange", "--format", "dot", "--in", "-"],
        stdin=graph,
    )
    assert dot.exit_code == 0
    assert dot.output.count("[shape=") == len(json.loads(graph)["nodes"])


# -- http server


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_http_health(client):
    assert client.get("/health").json() == {"ok": True}


def test_http_from_word_matches_service(client):
    r = client.get("/quiver/from-word", params={"graph": "kronecker", "word": LADDER_WORD})
    assert r.status_code == 200
    assert r.content == canonical_json(
        service.quiver_from_word("kronecker", LADDER_WORD)
    ).encode()


def test_http_mutate_matches_cli_bytes(client):
    seed = run_cli(["loopgroup", "seed", "w3"]).output
    body = {"seed": json.loads(seed), "vertex": 1}
    r1 = client.post("/seed/mutate", json=body)
    r2 = client.post("/seed/mutate", json=body)
    assert r1.status_code == 200
    assert r1.content == r2.content  # replay determinism
    cli = run_cli(["cluster", "mutate", "1", "--seed", "-"], stdin=seed)
    assert r1.content == cli.output.encode()


def test_http_error_mapping(client):
    frozen = client.post(
        "/seed/mutate",
        json={"seed": json.loads(run_cli(["loopgroup", "seed", "w3"]).output), "vertex": 2},
    )
    assert frozen.status_code == 400
    assert frozen.json()["error"] == "frozen_vertex"
    bad = client.post("/seed/mutate", json={"seed": 3})
    assert bad.status_code == 400
    assert bad.json()["error"] == "validation"
    unreduced = client.get(
        "/quiver/from-word", params={"graph": "a2", "word": "1,1"}
    )
    assert unreduced.status_code == 400
    assert unreduced.json()["error"] == "not_reduced"
    cell = client.get("/loopgroup/seed", params={"cell": "w9"})
    assert cell.status_code == 400
    assert cell.json()["error"] == "bad_request"


def test_http_explore_step(client):
    seed = json.loads(run_cli(["loopgroup", "seed", "w4"]).output)
    r = client.post("/seed/explore-step", json={"seed": seed})
    assert r.status_code == 200
    neighbors = r.json()["neighbors"]
    assert [n["vertex"] for n in neighbors] == ["1", "2"]


# -- suite plumbing


def test_run_suite_report_shape():
    report = suite.run_suite(TRIM)
    assert report["all_passed"] is True
    assert [c["name"] for c in report["checks"]] == [name for name, _ in suite.CHECKS]
    for c in report["checks"]:
        assert set(c) == {"name", "passed", "detail", "seconds"}
        assert c["passed"] is True


def test_run_suite_survives_exceptions():
    report = suite.run_suite(dict(TRIM, chain_word=[9, 9]))
    by_name = {c["name"]: c for c in report["checks"]}
    assert report["all_passed"] is False
    assert not by_name["chain_table"]["passed"]
    # other checks still ran
    assert by_name["minor_identities"]["passed"]
