"""Regenerate the frontend test fixtures from the real backend surfaces.

Drives the actual HTTP service (in process) and the actual CLI over a
deterministic synthetic game, captures the payloads the UI consumes, and
verifies the threshold round-trip: regenerating a layer in a session with
the same schedule the CLI ran must yield the same tree digest.

Run from the repo root:  python frontend/scripts/make_fixtures.py
"""

from __future__ import annotations

import json
import subprocess
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from snapgraph.service import create_app

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

SCHEDULE = [
    {
        "node_change_max": 0.2,
        "link_change_max": 0.5,
        "time_gap_max": 1.0,
        "frame_count_max": None,
    }
]

PERMISSIVE = {
    "node_change_max": 10.0,
    "link_change_max": 10.0,
    "time_gap_max": 100.0,
    "frame_count_max": None,
}


def fixture_tracking() -> str:
    """Twelve frames, three link regimes, 0.3 s apart."""
    rows = ["timestamp,player_id,team,x,y"]
    t = 0.0

    def push(positions: dict[str, tuple[str, float, float]]):
        nonlocal t
        for player, (team, x, y) in positions.items():
            rows.append(f"{t:.1f},{player},{team},{x},{y}")
        t = round(t + 0.3, 10)

    for _ in range(5):  # regime 1: A-B linked
        push({"A": ("home", 10, 25), "B": ("away", 14, 25),
              "C": ("home", 60, 10), "D": ("away", 60, 40)})
    for _ in range(4):  # regime 2: everyone isolated
        push({"A": ("home", 10, 25), "B": ("away", 40, 25),
              "C": ("home", 60, 10), "D": ("away", 60, 40)})
    for _ in range(3):  # regime 3: C-D linked
        push({"A": ("home", 10, 25), "B": ("away", 40, 25),
              "C": ("home", 60, 22), "D": ("away", 60, 28)})
    return "\n".join(rows) + "\n"


def fixture_events() -> str:
    return (
        "timestamp,event_type,score_a,score_b,major_player,secondary_player\n"
        "0.6,miss shot,0,0,A,B\n"
        "1.8,score,2,0,C,A\n"
        "3.0,score,2,2,D,\n"
    )


def write(name: str, payload) -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / name).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"wrote {name}")


def main() -> int:
    tracking = fixture_tracking()
    events = fixture_events()
    with tempfile.TemporaryDirectory() as tmp:
        client = TestClient(create_app(Path(tmp) / "data"))
        descriptor = client.post(
            "/datasets",
            files={"tracking": ("t.csv", tracking), "events": ("e.csv", events)},
            data={"name": "fixture"},
        ).json()
        dataset_id = descriptor["id"]
        frame_count = descriptor["frame_count"]
        write("descriptor.json", descriptor)
        write("matrix.json", client.get(f"/datasets/{dataset_id}/matrix").json())
        write(
            "projection.json",
            client.get(
                f"/datasets/{dataset_id}/projection?perplexity=2&seed=7&iters=60"
            ).json(),
        )
        write("events.json", client.get(f"/datasets/{dataset_id}/events").json())
        write(
            "membership_0_1.json",
            client.get(f"/datasets/{dataset_id}/membership?a=0&b=1").json(),
        )
        write(
            "membership_2_3.json",
            client.get(f"/datasets/{dataset_id}/membership?a=2&b=3").json(),
        )

        session = client.post(
            "/sessions",
            json={"dataset_id": dataset_id, "from_frame": 0,
                  "to_frame": frame_count - 1},
        ).json()
        write("session.json", session)
        sid = session["session_id"]

        delta = client.post(
            f"/sessions/{sid}/layers", json={"thresholds": PERMISSIVE}
        ).json()
        write("layer_delta.json", delta)

        regen = client.post(
            f"/sessions/{sid}/layers",
            json={"thresholds": SCHEDULE[0], "regenerate": True},
        ).json()
        write("regen_delta.json", regen)
        service_digest = client.get(f"/sessions/{sid}").json()["tree"]["digest"]

        # same schedule through the CLI, digest must agree
        work = Path(tmp) / "cli"
        work.mkdir()
        (work / "tracking.csv").write_text(tracking, encoding="utf-8")
        run = subprocess.run(
            [
                sys.executable, "-m", "snapgraph.cli", "tree",
                "--tracking", str(work / "tracking.csv"),
                "--schedule", json.dumps(SCHEDULE),
                "--out-dir", str(work / "out"),
            ],
            capture_output=True,
            text=True,
        )
        if run.returncode != 0:
            print(run.stderr, file=sys.stderr)
            return 1
        cli_tree = json.loads((work / "out" / "tree.json").read_text())
        if cli_tree["digest"] != service_digest:
            print(
                f"DIGEST MISMATCH: cli {cli_tree['digest']} != "
                f"service {service_digest}",
                file=sys.stderr,
            )
            return 1
        write(
            "roundtrip.json",
            {
                "schedule": SCHEDULE,
                "service_tree_digest": service_digest,
                "cli_tree_digest": cli_tree["digest"],
            },
        )
    print("fixtures regenerated; service and CLI digests agree")
    return 0


if __name__ == "__main__":
    sys.exit(main())
