#!/usr/bin/env python3
"""Exit codes, schema validity and rerun determinism of the command-line tool.

usage: check_cli.py <telescopes binary> <source dir>
"""

import json
import os
import subprocess
import sys

import jsonschema

CLI, SRC = sys.argv[1], sys.argv[2]
SPECS = os.path.join(SRC, "specs")
with open(os.path.join(SRC, "schema", "report.v1.json")) as f:
    SCHEMA = json.load(f)

failures = []


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True, timeout=1200)


def spec(name):
    return os.path.join(SPECS, name)


def check(name, ok, detail=""):
    print(("ok   " if ok else "FAIL ") + name + (": " + detail if detail and not ok else ""))
    if not ok:
        failures.append(name)


def json_run(name, *args, rc=0):
    p = run(*args, "--format", "json")
    check(name + " exit " + str(rc), p.returncode == rc, "got %d, stderr %s" % (p.returncode, p.stderr.strip()))
    try:
        doc = json.loads(p.stdout)
        jsonschema.validate(doc, SCHEMA)
        check(name + " validates", True)
        return p.stdout, doc
    except (json.JSONDecodeError, jsonschema.ValidationError) as e:
        check(name + " validates", False, str(e).splitlines()[0])
        return p.stdout, None


def quantity(doc, key):
    for r in doc["reports"]:
        if key in r["quantities"]:
            return r["quantities"][key]
    return None


# verify: pass, negative control, determinism
out1, doc = json_run("verify alt", "verify", "--spec", spec("alt_5_2.tspec"), "--levels", "4", "--seed", "5")
check("verify alt passes", doc is not None and doc["verdict"] == "pass")
out2, _ = json_run("verify alt rerun", "verify", "--spec", spec("alt_5_2.tspec"), "--levels", "4", "--seed", "5")
check("verify alt rerun is byte-identical", out1 == out2)
json_run("verify corrupted", "verify", "--spec", spec("corrupted.tspec"), "--levels", "4", rc=1)
for s in ("el_4_2.tspec", "el_4_3.tspec", "psl_4_3.tspec", "embed_alt5.tspec"):
    _, d = json_run("verify " + s, "verify", "--spec", spec(s), "--levels", "3")
    check("verify %s has no failure" % s, d is not None and d["verdict"] in ("pass", "skipped(cap)"))

# parse errors exit 2
p = run("verify", "--spec", spec("missing.tspec"))
check("missing spec exits 2", p.returncode == 2)
p = run("verify", "--spec", spec("bad_syntax.tspec"))
check("bad spec syntax exits 2", p.returncode == 2)
p = run("eval", "--spec", spec("alt_5_2.tspec"), "T(1,b0", "3")
check("malformed expression exits 2", p.returncode == 2)
check("malformed expression reports a position", "position" in p.stderr, p.stderr)
p = run("verify", "--spec", spec("alt_5_2.tspec"), "--format", "yaml")
check("bad option value exits 2", p.returncode == 2)

# eval
_, d = json_run("eval identity", "eval", "--spec", spec("alt_5_2.tspec"), "D(1,id)", "5")
check("D(1,id) is the identity at level 5", d is not None and quantity(d, "identity") == "true")
_, d = json_run("eval tilde", "eval", "--spec", spec("alt_5_2.tspec"), "T(1,b0)", "3")
check("T(1,b0) is nontrivial at level 3", d is not None and quantity(d, "identity") == "false")
_, d = json_run("eval tilde level 1", "eval", "--spec", spec("alt_5_2.tspec"), "T(1,b0)", "1")
check("T(1,b0) is trivial at level 1", d is not None and quantity(d, "identity") == "true")

# head, nf, gen2, act
_, d = json_run("head eq", "head", "--spec", spec("alt_5_2.tspec"), "eq", "T(1,b0)", "1")
check("head eq T(1,b0) 1 is false", d is not None and quantity(d, "equal") == "false")
_, d = json_run("head eq sum", "head", "--spec", spec("alt_5_2.tspec"), "eq", "F(3,a)*T(1,b0)*F(2,a)", "T(1,b0)")
check("head eq up to one-hot atoms is true", d is not None and quantity(d, "equal") == "true")
word = "T(1,b0)*D(1,g0)*T(1,b1)^-1*D(1,g1)"
_, d = json_run("nf", "nf", "--spec", spec("alt_5_2.tspec"), word)
check("nf has m <= length", d is not None and int(quantity(d, "m")) <= int(quantity(d, "length")))
check("nf reassembles", d is not None and d["verdict"] == "pass")
_, d = json_run("gen2", "gen2", "--spec", spec("alt_5_2.tspec"), "--check-levels", "2..3")
check("gen2 order check passes", d is not None and d["verdict"] == "pass")
a1, d = json_run("act", "act", "--spec", spec("alt_5_2.tspec"), "T(1,b0)", "x5x1@2", "--seed", "9")
a2, _ = json_run("act rerun", "act", "--spec", spec("alt_5_2.tspec"), "T(1,b0)", "x5x1@2", "--seed", "9")
check("act rerun is byte-identical", a1 == a2)

print("%d failure(s)" % len(failures))
sys.exit(1 if failures else 0)
