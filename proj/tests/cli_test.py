# Copyright 2026 The EcoDigger Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""End-to-end checks of the ecodigger command line.

usage: cli_test.py <ecodigger binary>
"""

import gzip
import json
import os
import subprocess
import sys
import tempfile

BIN = sys.argv[1]
failures = []


def run(*args, stdin=None, env=None):
    return subprocess.run([BIN, *args], input=stdin, capture_output=True, text=True, env=env)


def expect(cond, what):
    if not cond:
        failures.append(what)


def line(eid, etype, actor, repo, when, payload):
    return json.dumps({
        "id": str(eid), "type": etype,
        "actor": {"id": actor, "login": "u%d" % actor},
        "repo": {"id": repo, "name": "o/r%d" % repo},
        "payload": payload, "public": True, "created_at": when,
    })


def archive(path, hour):
    rows, eid = [], 0
    # Five developers spread over six repos with overlapping membership.
    for dev in range(1, 6):
        for repo in range(10, 16):
            if (dev + repo) % 3 == 0:
                continue
            for k in range((dev * repo) % 4 + 1):
                eid += 1
                when = "2019-06-01T%02d:%02d:00Z" % (hour, (eid * 7) % 60)
                if k % 2:
                    rows.append(line("%d%d" % (hour, eid), "IssuesEvent", dev, repo, when,
                                     {"action": "opened", "issue": {"number": eid}}))
                else:
                    rows.append(line("%d%d" % (hour, eid), "IssueCommentEvent", dev, repo, when,
                                     {"action": "created", "issue": {"number": 1}}))
    rows.append("{broken")
    with gzip.open(path, "wt") as f:
        f.write("\n".join(rows) + "\n")


with tempfile.TemporaryDirectory() as tmp:
    env = dict(os.environ, ECODIGGER_DATA_DIR=os.path.join(tmp, "store"))

    r = run(env=env)
    expect(r.returncode == 1, "no arguments exits 1, got %d" % r.returncode)
    r = run("frobnicate", env=env)
    expect(r.returncode == 1 and "unknown subcommand 'frobnicate'" in r.stderr, "unknown subcommand")
    r = run("--help", env=env)
    expect(r.returncode == 0 and "ingest" in r.stdout, "--help exits 0")
    r = run("query", "--limit", "zero", env=env)
    expect(r.returncode == 1, "bad flag value exits 1")

    paths = []
    for hour in (0, 1):
        p = os.path.join(tmp, "2019-06-01-%d.json.gz" % hour)
        archive(p, hour)
        paths.append(p)
    r = run("ingest", *paths, env=env)
    expect(r.returncode == 0, "ingest exits 0: " + r.stderr)
    report = json.loads(r.stdout)
    expect(report["lines_read"] == report["events_emitted"] + report["lines_skipped"], "ingest invariant")
    expect(report["lines_skipped"] == 2, "two junk lines skipped")
    r = run("ingest", *paths, env=env)
    expect(json.loads(r.stdout)["events_stored"] == 0, "re-ingest stores nothing new")
    r = run("ingest", os.path.join(tmp, "missing.json.gz"), env=env)
    expect(r.returncode == 2, "missing archive exits 2, got %d" % r.returncode)

    r = run("activity", "--window", "2019-06", "--limit", "3", env=env)
    rows = json.loads(r.stdout)
    expect(r.returncode == 0 and len(rows) == 3, "activity rows")
    expect([x["score"] for x in rows] == sorted([x["score"] for x in rows], reverse=True), "activity sorted")

    # Export then influence must equal the direct computation.
    edges = os.path.join(tmp, "edges.tsv")
    r = run("network", "export", "--window", "2019-06", "-o", edges, env=env)
    expect(r.returncode == 0, "network export: " + r.stderr)
    direct = json.loads(run("influence", "--window", "2019-06", "--limit", "0", env=env).stdout)
    with open(edges) as f:
        piped = run("influence", "--edges", "-", "--limit", "0", stdin=f.read(), env=env)
    piped = json.loads(piped.stdout)
    expect(len(direct) == len(piped) == 6, "six projects ranked")
    for a, b in zip(direct, piped):
        expect(a["project"] == b["project"] and abs(a["score"] - b["score"]) <= 1e-9,
               "influence via edge list differs for %s" % a["project"])
    r = run("network", "components", "--edges", edges, env=env)
    expect(json.loads(r.stdout)["components"] == 1, "one component")

    r = run("metric", "--list", env=env)
    expect("issue_response_time" in r.stdout, "metric --list")
    r = run("metric", "issues_new", "--repo", "10", "--window", "2019-06", env=env)
    expect(r.returncode == 0 and "value" in json.loads(r.stdout), "metric issues_new")
    r = run("metric", "nope", "--repo", "10", env=env)
    expect(r.returncode == 1, "unknown metric exits 1")

    r = run("query", "--metric", "issues_new", "--startYear", "2019", "--endYear", "2019",
            "--repoIds", "10,11", "--format", "csv", env=env)
    lines = r.stdout.strip().split("\n")
    expect(r.returncode == 0 and lines[0].startswith("id,name,") and len(lines) == 3, "query csv")
    r = run("query", "--metric", "issues_new", "--startMonth", "13", env=env)
    expect(r.returncode == 1, "invalid query exits 1")

if failures:
    for f in failures:
        print("FAIL:", f)
    sys.exit(1)
print("cli ok")
