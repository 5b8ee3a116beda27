from __future__ import annotations

import json
import subprocess
import sys

import pytest

from doublemirror.errors import InputError
from doublemirror.nefpartitions import validate_nef_partition
from doublemirror.pipeline import DoubleMirrorInput, double_mirror_pipeline
from doublemirror.polytopes import hull
from doublemirror.records import (
    dumps_record,
    mirror_input_record,
    parse_any,
    parse_plain_polytope,
    parse_record,
    partition_record,
    polytope_record,
    report_record,
    report_text,
)
from support import FIG_ALT, FIG_BASE, FIG_SEGMENT, FIG_TRIANGLE


def cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "doublemirror", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


def fig_input_record():
    return {
        "type": "double_mirror_input",
        "parts": [FIG_TRIANGLE, FIG_SEGMENT],
        "base_points": FIG_BASE,
        "alt_base_points": FIG_ALT,
    }


def test_parse_plain_triangle():
    p = parse_plain_polytope("2 3\n0 0\n1 1\n-1 1\n")
    assert p == hull(FIG_TRIANGLE)


def test_parse_plain_errors():
    with pytest.raises(InputError, match="header"):
        parse_plain_polytope("")
    with pytest.raises(InputError, match="expected 2 integers"):
        parse_plain_polytope("2 2\n0 0\n1 1 1\n")
    with pytest.raises(InputError, match="point rows"):
        parse_plain_polytope("2 3\n0 0\n1 1\n")


def test_polytope_record_roundtrip():
    p = hull(FIG_TRIANGLE)
    rec = polytope_record(p)
    assert parse_record(json.loads(dumps_record(rec))) == p


def test_partition_record_roundtrip():
    partition = validate_nef_partition([hull(FIG_TRIANGLE), hull(FIG_SEGMENT)], FIG_BASE)
    rec = partition_record(partition)
    again = parse_record(json.loads(dumps_record(rec)))
    assert again == partition


def test_mirror_input_record_roundtrip():
    data = DoubleMirrorInput.from_vertices([FIG_TRIANGLE, FIG_SEGMENT], FIG_BASE, FIG_ALT)
    rec = mirror_input_record(data)
    again = parse_record(json.loads(dumps_record(rec)))
    assert again == data


def test_parse_any_dispatch():
    assert parse_any("2 3\n0 0\n1 1\n-1 1\n") == hull(FIG_TRIANGLE)
    obj = parse_any(json.dumps(fig_input_record()))
    assert isinstance(obj, DoubleMirrorInput)
    with pytest.raises(InputError):
        parse_any(json.dumps({"type": "mystery"}))


def test_report_record_roundtrips_as_json():
    report = double_mirror_pipeline(
        DoubleMirrorInput.from_vertices([FIG_TRIANGLE, FIG_SEGMENT], FIG_BASE, FIG_ALT)
    )
    rec = report_record(report)
    text = dumps_record(rec)
    assert json.loads(text) == rec
    assert parse_record(json.loads(text)) == rec


def test_report_text_mentions_trivial_wall_crossing():
    report = double_mirror_pipeline(
        DoubleMirrorInput.from_vertices([FIG_TRIANGLE, FIG_SEGMENT], FIG_ALT, FIG_ALT)
    )
    assert "splittings identical; trivial wall-crossing" in report_text(report)


def test_cli_polytope_info(tmp_path):
    path = tmp_path / "square.txt"
    path.write_text("2 4\n1 1\n1 -1\n-1 1\n-1 -1\n")
    res = cli("polytope", "info", str(path))
    assert res.returncode == 0
    assert "reflexive: yes" in res.stdout
    res_rec = cli("--format", "record", "polytope", "info", str(path))
    rec = json.loads(res_rec.stdout)
    assert rec["reflexive"] is True
    assert rec["lattice_point_count"] == 9


def test_cli_exit_code_input_error(tmp_path):
    path = tmp_path / "broken.txt"
    path.write_text("not a header\n")
    res = cli("polytope", "info", str(path))
    assert res.returncode == 2
    res = cli("polytope", "info", str(tmp_path / "missing.txt"))
    assert res.returncode == 2


def test_cli_exit_code_verification_failure(tmp_path):
    path = tmp_path / "bad.rec"
    path.write_text(
        json.dumps(
            {
                "type": "double_mirror_input",
                "parts": [FIG_TRIANGLE, FIG_SEGMENT],
                "base_points": FIG_ALT,
                "alt_base_points": [[1, 1], [0, -1]],
            }
        )
    )
    res = cli("mirror", "report", str(path))
    assert res.returncode == 1
    assert "nef partition axiom" in res.stderr


def test_cli_mirror_report_deterministic(tmp_path):
    path = tmp_path / "fig.rec"
    path.write_text(json.dumps(fig_input_record()))
    a = cli("--format", "record", "--seed", "7", "mirror", "report", str(path))
    b = cli("--format", "record", "--seed", "7", "mirror", "report", str(path))
    assert a.returncode == 0
    assert a.stdout == b.stdout
    rec = json.loads(a.stdout)
    assert rec["passed"] is True
    assert len(rec["sides"][0]["table"]) == 8


def test_cli_nefpart_commands(tmp_path):
    path = tmp_path / "part.rec"
    path.write_text(
        json.dumps(
            {
                "type": "nef_partition",
                "parts": [FIG_TRIANGLE, FIG_SEGMENT],
                "base_points": FIG_ALT,
            }
        )
    )
    assert cli("nefpart", "validate", str(path)).returncode == 0
    dual = cli("--format", "record", "nefpart", "dual", str(path))
    assert dual.returncode == 0
    rec = json.loads(dual.stdout)
    assert sorted(map(tuple, rec["parts"][0] + rec["parts"][1])) == sorted(
        [(-1, 0), (0, -1), (1, 0), (-1, 1), (0, 0), (1, 1)]
    )

    square = tmp_path / "square.txt"
    square.write_text("2 4\n1 1\n1 -1\n-1 1\n-1 -1\n")
    special = cli("--format", "record", "nefpart", "special", str(square), "--length", "1")
    rec = json.loads(special.stdout)
    assert rec["simplices"] == [[[0, 0]]]


def test_cli_cayley_and_cox(tmp_path):
    path = tmp_path / "part.rec"
    path.write_text(
        json.dumps(
            {
                "type": "nef_partition",
                "parts": [FIG_TRIANGLE, FIG_SEGMENT],
                "base_points": FIG_ALT,
            }
        )
    )
    res = cli("--format", "record", "cayley", str(path))
    assert res.returncode == 0
    rec = json.loads(res.stdout)
    assert rec["gorenstein"]["index"] == 2
    assert len(rec["splittings"]) == 2

    square = tmp_path / "square.txt"
    square.write_text("2 4\n1 1\n1 -1\n-1 1\n-1 -1\n")
    res = cli("--format", "record", "cox", str(square))
    rec = json.loads(res.stdout)
    assert sorted(map(tuple, rec["degree_matrix"])) == [(0, 1, 1, 0), (1, 0, 0, 1)]
    assert len(rec["irrelevant_collections"]) == 2


def test_cli_triangulate(tmp_path):
    path = tmp_path / "tri.rec"
    path.write_text(json.dumps({"points": [[0, 1], [1, 1], [2, 1]], "weights": [1, 0, 1]}))
    res = cli("--format", "record", "triangulate", str(path))
    assert res.returncode == 0
    rec = json.loads(res.stdout)
    assert rec["cells"] == [[0, 1], [1, 2]]
    assert rec["is_triangulation"] is True
    assert rec["certificate"] is not None
    assert rec["chamber_character_rows"] == [[1]]


def test_cli_scan_flags_double_mirror(tmp_path):
    lines = [
        json.dumps(
            {
                "type": "nef_partition",
                "parts": [[[-1, 0], [1, 0]], [[0, -1], [0, 1]]],
                "base_points": [[0, 0], [0, 0]],
            }
        ),
        json.dumps(fig_input_record()),
        json.dumps({"type": "polytope", "vertices": [[1, 1], [1, -1], [-1, 1], [-1, -1]]}),
    ]
    path = tmp_path / "corpus.jsonl"
    path.write_text("\n".join(lines) + "\n")
    res = cli("mirror", "scan", str(path))
    assert res.returncode == 0
    assert "line 2: double mirror candidate (2 splittings)" in res.stdout
    assert "line 1" not in res.stdout
    assert "flagged 1" in res.stdout


def test_cli_scan_parallel_order(tmp_path):
    line = json.dumps(fig_input_record())
    path = tmp_path / "corpus.jsonl"
    path.write_text("\n".join([line] * 8) + "\n")
    seq = cli("mirror", "scan", str(path))
    par = cli("--jobs", "2", "mirror", "scan", str(path))
    assert seq.returncode == par.returncode == 0
    assert seq.stdout == par.stdout


def test_scan_streaming_memory():
    # Scan must hold one record at a time, not the corpus.
    import io
    import tracemalloc

    from doublemirror.cli import _scan_one

    record = json.dumps(
        {
            "type": "nef_partition",
            "parts": [[[-1], [1]]],
            "base_points": [[0]],
        }
    )

    def run(n):
        stream = io.StringIO("\n".join([record] * n) + "\n")
        tracemalloc.start()
        for i, line in enumerate(stream, start=1):
            _scan_one((i, line))
        _, peak = tracemalloc.get_traced_memory()
        tracemalloc.stop()
        return peak

    small = run(50)
    large = run(2000)
    assert large < small * 3 + 1_000_000
