#!/usr/bin/env python3
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

"""Expected values for the community-health fixture.

Recomputes every metric for events.jsonl over March 2019 straight from the
metric definitions in the README and prints the sheet that expected.csv
holds. Run with --check to diff against the committed sheet.

Definitions used here, all over the window W = [2019-03-01, 2019-04-01):
  contributor event   comment, issue opened, PR opened, review comment,
                      PR closed as merged
  issues_new          non-PR issues opened in W
  issues_closed       close transitions of non-PR issues inside W
  response time       opened -> first comment/review by someone else, for
                      threads opened in W
  resolution          opened -> each close inside W
  age                 opened -> end of W, for threads still open at the end
  bus_factor          fewest top contributors whose summed activity is
                      strictly more than half of the total
  inactive            contributor in the 180 days before W, silent in W
"""

import csv
import io
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

HERE = Path(__file__).resolve().parent
START = int(datetime(2019, 3, 1, tzinfo=timezone.utc).timestamp())
STOP = int(datetime(2019, 4, 1, tzinfo=timezone.utc).timestamp())
WEIGHTS = {"comment": 1, "open_issue": 2, "open_pr": 3, "review_pr": 4, "pr_merged": 2}


def ts(text):
    return int(datetime.strptime(text, "%Y-%m-%dT%H:%M:%SZ").replace(tzinfo=timezone.utc).timestamp())


def inside(t):
    return START <= t < STOP


def behavior(e):
    kind, action = e["type"], e["payload"].get("action")
    if kind == "IssueCommentEvent":
        return "comment"
    if kind == "IssuesEvent" and action == "opened":
        return "open_issue"
    if kind == "PullRequestEvent" and action == "opened":
        return "open_pr"
    if kind == "PullRequestReviewCommentEvent":
        return "review_pr"
    if kind == "PullRequestEvent" and action == "closed" and e["payload"]["pull_request"].get("merged"):
        return "pr_merged"
    return None


def thread_of(e):
    p = e["payload"]
    if e["type"] == "IssuesEvent":
        return ("issue", p["issue"]["number"])
    if e["type"] == "IssueCommentEvent":
        return ("pr" if "pull_request" in p["issue"] else "issue", p["issue"]["number"])
    if e["type"] == "PullRequestEvent":
        return ("pr", p["number"])
    if e["type"] == "PullRequestReviewCommentEvent":
        return ("pr", p["pull_request"]["number"])
    return None


def stats(samples):
    if not samples:
        return None
    s = sorted(samples)
    n = len(s)
    median = s[n // 2] if n % 2 else (s[n // 2 - 1] + s[n // 2]) / 2
    return {"count": n, "mean": sum(s) / n, "median": median, "p90": s[math.ceil(0.9 * n) - 1]}


def compute(events):
    events = sorted(events, key=lambda e: (ts(e["created_at"]), e["id"]))
    threads = {}
    for e in events:
        key = thread_of(e)
        if key is None:
            continue
        t = threads.setdefault(key, {"opened": None, "by": None, "changes": [], "response": None,
                                     "reviews": [], "merged_at": None, "lines": None})
        when, action = ts(e["created_at"]), e["payload"].get("action")
        is_state = e["type"] in ("IssuesEvent", "PullRequestEvent")
        if is_state and action == "opened" and t["opened"] is None:
            t["opened"], t["by"] = when, e["actor"]["id"]
        elif is_state and action == "closed":
            t["changes"].append((when, "closed"))
            pr = e["payload"].get("pull_request", {})
            if pr.get("merged"):
                t["merged_at"] = when
                t["lines"] = (pr["additions"], pr["deletions"])
        elif is_state and action == "reopened":
            t["changes"].append((when, "reopened"))
        elif not is_state:
            if e["type"] == "PullRequestReviewCommentEvent":
                t["reviews"].append(when)
            if (t["response"] is None and t["opened"] is not None
                    and e["actor"]["id"] != t["by"] and when >= t["opened"]):
                t["response"] = when

    def open_at_stop(t):
        if t["opened"] is None or t["opened"] >= STOP:
            return False
        state = "open"
        for when, what in t["changes"]:
            if when < STOP:
                state = "closed" if what == "closed" else "open"
        return state == "open"

    out = {}
    for kind, prefix in (("issue", "issue"), ("pr", "change_request")):
        group = [t for k, t in threads.items() if k[0] == kind]
        opened = [t for t in group if t["opened"] is not None and inside(t["opened"])]
        closes = [(t, w) for t in group for w, what in t["changes"] if what == "closed" and inside(w)]
        out[prefix + "_response_time"] = stats([t["response"] - t["opened"] for t in opened if t["response"]])
        out[prefix + "_resolution_duration"] = stats([w - t["opened"] for t, w in closes if t["opened"] is not None])
        out[prefix + "_age"] = stats([STOP - t["opened"] for t in group if open_at_stop(t)])
        if kind == "issue":
            out["issues_new"] = len(opened)
            out["issues_closed"] = len(closes)
        else:
            out["change_requests"] = len(opened)
            out["change_requests_accepted"] = sum(1 for t in group if t["merged_at"] and inside(t["merged_at"]))
            out["change_request_reviews"] = sum(1 for t in group for r in t["reviews"] if inside(r))
            merged = [t for t in group if t["merged_at"] and inside(t["merged_at"])]
            added = sum(t["lines"][0] for t in merged)
            removed = sum(t["lines"][1] for t in merged)
            out["code_change_lines"] = {"added": added, "removed": removed, "sum": added + removed}

    out["technical_fork"] = sum(1 for e in events if e["type"] == "ForkEvent" and inside(ts(e["created_at"])))

    first_seen, score, heat, before, during = {}, {}, {}, set(), set()
    for e in events:
        b = behavior(e)
        if b is None:
            continue
        who, when = e["actor"]["id"], ts(e["created_at"])
        first_seen.setdefault(who, when)
        if START - 180 * 86400 <= when < START:
            before.add(who)
        if inside(when):
            during.add(who)
            score[who] = score.get(who, 0) + WEIGHTS[b]
            dt = datetime.fromtimestamp(when, tz=timezone.utc)
            cell = (dt.weekday(), dt.hour)
            heat[cell] = heat.get(cell, 0) + 1
    out["new_contributors"] = sorted(w for w, t in first_seen.items() if inside(t))
    out["inactive_contributors"] = len(before - during)
    total, running, bus = sum(score.values()), 0, 0
    for s in sorted(score.values(), reverse=True):
        running += s
        bus += 1
        if running > total / 2:
            break
    out["bus_factor"] = bus
    out["activity"] = total
    out["active_dates_and_times"] = heat
    return out


def sheet(values):
    rows = [("metric", "field", "value")]
    for name in sorted(values):
        v = values[name]
        if name == "active_dates_and_times":
            for (day, hour), count in sorted(v.items()):
                rows.append((name, "cell_%d_%02d" % (day, hour), count))
            rows.append((name, "total", sum(v.values())))
        elif name == "new_contributors":
            rows.append((name, "count", len(v)))
            rows.append((name, "ids", " ".join(map(str, v))))
        elif isinstance(v, dict):
            for field in v:
                rows.append((name, field, v[field]))
        elif v is None:
            rows.append((name, "count", 0))
        else:
            rows.append((name, "value", v))
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def main():
    with open(HERE / "events.jsonl") as f:
        events = [json.loads(line) for line in f if line.strip()]
    text = sheet(compute(events))
    if "--check" in sys.argv:
        committed = (HERE / "expected.csv").read_text()
        if committed != text:
            sys.stderr.write("expected.csv is stale\n")
            return 1
        return 0
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
