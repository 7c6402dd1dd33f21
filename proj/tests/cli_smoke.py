#!/usr/bin/env python3
"""End-to-end checks of the command-line tool: exit codes, payload shapes,
and byte-for-byte determinism of repeated runs.  Usage: cli_smoke.py <binary>."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

BIN = sys.argv[1]
FAILURES = []


def run(*args, expect=None):
    p = subprocess.run([BIN, *args], capture_output=True, text=True)
    if expect is not None and p.returncode != expect:
        raise AssertionError(
            f"{' '.join(args)}: exit {p.returncode}, expected {expect}\n"
            f"stdout: {p.stdout[:500]}\nstderr: {p.stderr[:500]}"
        )
    return p


def payload(p):
    return json.loads(p.stdout)["payload"]


def check(name, fn):
    try:
        fn()
        print(f"ok   {name}")
    except Exception as e:  # noqa: BLE001 - report and continue
        FAILURES.append(name)
        print(f"FAIL {name}: {e}")


with tempfile.TemporaryDirectory() as td:
    tmp = Path(td)
    w06 = str(tmp / "w06.json")
    w0c = str(tmp / "w0c.json")
    wc13 = str(tmp / "wc13.json")

    def make_webs():
        run("builtin", "w0", "-n", "3", "--out", w06, expect=0)
        run("builtin", "w0", "-n", "3", "--deform", "c", "--out", w0c, expect=0)
        doc = json.loads(Path(w0c).read_text())
        assert doc["parameters"] == ["c"], doc
        assert doc["fields"][0]["components"][0] == "(x1 + c)/(x3 + c)", doc
        # Bake c = 1/3 into a plain three-variable web file.
        baked = {
            "n": 3,
            "d": 6,
            "fields": [
                {
                    "a": f["a"],
                    "components": [s.replace("c", "(1/3)") for s in f["components"]],
                }
                for f in doc["fields"]
            ],
        }
        Path(wc13).write_text(json.dumps(baked))

    check("builtin emits web files", make_webs)

    def rank_bound():
        p = payload(run("rank-bound", "-n", "3", "-d", "6", expect=0))
        assert p["bound"] == 10 and p["h0"] == 3, p
        assert payload(run("rank-bound", "-n", "2", "-d", "5", expect=0))["bound"] == 6
        assert payload(run("rank-bound", "-n", "3", "-d", "4", expect=0))["bound"] == 1

    check("rank-bound values", rank_bound)

    def matrices():
        p = payload(run("matrices", "--web", w06, "--order", "2", expect=0))
        assert p["M"] == {"rows": 20, "cols": 30, "rank": 20}, p
        p = payload(run("matrices", "--web", w06, "--order", "3", expect=0))
        assert p["P"] == {"rows": 30, "cols": 30, "rank": 30}, p

    check("matrices shapes and ranks", matrices)

    def flat_verdict():
        p = payload(run("curvature", "--web", w06, "--seed", "11", expect=0))
        assert p["verdict"] == "FlatAtSampledPoints", p
        assert all(set(r) == {"0"} for q in p["pairs"] for r in q["rows"]), p
        assert p["witnesses"] == [], p

    check("curvature accepts the plain web", flat_verdict)

    def refute():
        p = payload(
            run("curvature", "--web", wc13, "--backend", "point", "--samples", "5",
                "--seed", "7", expect=1)
        )
        assert p["verdict"] == "NotFlat", p
        pair12 = next(q for q in p["pairs"] if q["k"] == 1 and q["m"] == 2)
        rows = {i + 1 for i, r in enumerate(pair12["rows"]) if "1" in r}
        assert rows and rows <= {5, 6, 7}, rows
        w = p["witnesses"][0]
        assert w["row"] in (5, 6, 7) and w["col"] >= 5, w

    check("curvature refutes the deformed web", refute)

    def param_pin_matches_baked():
        a = payload(run("curvature", "--web", w0c, "--param", "c=1/3", "--seed", "7",
                        expect=1))
        b = payload(run("curvature", "--web", wc13, "--seed", "7", expect=1))
        assert a["verdict"] == b["verdict"] == "NotFlat"
        assert [q["rows"] for q in a["pairs"]] == [q["rows"] for q in b["pairs"]]

    check("--param pinning matches the baked-in file", param_pin_matches_baked)

    def subset():
        run("curvature", "--web", w06, "--subset", "1,2,3,4", expect=0)

    check("curvature on the four-field sub-web", subset)

    def symbolic():
        p = payload(run("curvature", "--web", w06, "--backend", "symbolic",
                        "--subset", "1,2,3,4,5", expect=0))
        assert p["verdict"] == "FlatCertified", p
        assert p["ro"] == 4, p

    check("symbolic certification of the five-field sub-web", symbolic)

    def verdict_only():
        p = payload(run("check-max-rank", "--web", w06, expect=0))
        assert list(p.keys()) == ["verdict"], p

    check("check-max-rank is verdict-only", verdict_only)

    def flat_section():
        p = payload(run("flat-section", "--web", w06, "--point", "2,3,5",
                        "--init", "e1", "--order", "5", expect=0))
        assert p["order"] == 5 and len(p["slots"]) == 56, p
        q = payload(
            run("flat-section", "--web", wc13, "--point", "2,3,5",
                "--init", "1,-2,1/2,3,-1/3,2,5,-1,1/4,-3/2", "--order", "4", expect=1)
        )
        assert "inconsistent" in q, q

    check("flat-section growth and obstruction", flat_section)

    def subweb():
        p = payload(run("subweb", "--web", w06, "--keep", "1,2,3,4,5", expect=0))
        assert p["ok"] and p["ro_sub"] == 4, p

    check("subweb nesting from the command line", subweb)

    def connection_cmd():
        p = payload(run("connection", "--web", w06, "--backend", "point",
                        "--seed", "5", expect=0))
        assert p["ro"] == 10 and len(p["A"]) == 3, p
        assert p["pivots"] == [1, 5, 8, 11, 15, 18, 21, 24, 27, 30], p

    check("connection at a sampled point", connection_cmd)

    def errors():
        run("curvature", "--web", str(tmp / "missing.json"), expect=2)
        run("rank-bound", "-n", "3", "-d", "3", expect=2)
        run("nonsense", expect=2)

    check("error paths exit with code 2", errors)

    def determinism():
        a = run("curvature", "--web", wc13, "--seed", "7", expect=1).stdout
        b = run("curvature", "--web", wc13, "--seed", "7", expect=1).stdout
        ja, jb = json.loads(a), json.loads(b)
        ja.pop("timing_ms"), jb.pop("timing_ms")
        assert json.dumps(ja) == json.dumps(jb)

    check("identical runs reproduce the report", determinism)

if FAILURES:
    print(f"{len(FAILURES)} smoke check(s) failed")
    sys.exit(1)
print("all smoke checks passed")
