"""Drive the HTTP service end to end, the way the UI does.

Uploads a dataset, reads the overview aggregates (matrix, projection,
event timeline), opens a session over a brushed frame range, generates and
regenerates tree layers, and drills into one snapshot's detail payload.
Uses the in-process test client, so no server or network is needed.
"""

import tempfile

from fastapi.testclient import TestClient

from snapgraph.service import create_app

TRACKING = ["timestamp,player_id,team,x,y"]
t = 0.0
for k in range(8):
    close_b = k < 4  # B shadows A for the first four frames only
    bx = 13 + 0.1 * k if close_b else 40 + 4 * k
    TRACKING += [
        f"{t:.1f},A,home,{10 + 0.1 * k:.1f},25.0",
        f"{t:.1f},B,away,{bx:.1f},25.0",
        f"{t:.1f},C,home,60.0,{10 + 4 * k:.1f}",
        f"{t:.1f},D,away,60.0,{42 - 4 * k:.1f}",
    ]
    t += 0.3

EVENTS = (
    "timestamp,event_type,score_a,score_b,major_player,secondary_player\n"
    "0.6,miss shot,0,0,A,B\n"
    "1.8,score,2,0,C,A\n"
)

with tempfile.TemporaryDirectory() as data_dir, TestClient(create_app(data_dir)) as client:
    # 1. upload
    descriptor = client.post(
        "/datasets",
        files={
            "tracking": ("tracking.csv", "\n".join(TRACKING) + "\n"),
            "events": ("events.csv", EVENTS),
        },
        data={"name": "walkthrough"},
    ).json()
    dataset_id = descriptor["id"]
    print(f"dataset {dataset_id}: {descriptor['frame_count']} frames, "
          f"granularity {descriptor['granularity']:.1f}s")

    # 2. overview: who links with whom, and when
    matrix = client.get(f"/datasets/{dataset_id}/matrix").json()
    for pair in matrix["pairs"]:
        a = matrix["nodes"][pair["a"]]["node_id"]
        b = matrix["nodes"][pair["b"]]["node_id"]
        print(f"  link {a}-{b}: {pair['count']} frames")
    highlight = client.get(f"/datasets/{dataset_id}/membership?a=0&b=1").json()
    print("  frames containing A-B:", highlight["frames"])

    # 3. overview: scatter projection and score timeline
    projection = client.get(
        f"/datasets/{dataset_id}/projection?perplexity=2&seed=1&iters=120"
    ).json()
    print(f"  projection: {len(projection['points'])} points")
    events = client.get(f"/datasets/{dataset_id}/events").json()
    print("  lead timeline:", [(p["timestamp"], p["lead"]) for p in events["timeline"]])

    # 4. brush a contiguous range and open a session
    session = client.post(
        "/sessions", json={"dataset_id": dataset_id, "from_frame": 0, "to_frame": 7}
    ).json()
    sid = session["session_id"]
    print(f"session {sid}: layer 0 size {len(session['tree']['layers'][0])}")

    # 5. tune thresholds and generate; too loose, so regenerate tighter
    loose = {"node_change_max": 5.0, "link_change_max": 5.0, "time_gap_max": 10.0,
             "frame_count_max": None}
    delta = client.post(f"/sessions/{sid}/layers", json={"thresholds": loose}).json()
    print(f"  loose gates -> {len(delta['snapshots'])} snapshot(s)")
    tight = dict(loose, link_change_max=0.5)
    delta = client.post(
        f"/sessions/{sid}/layers", json={"thresholds": tight, "regenerate": True}
    ).json()
    widths = [s["frame_count"] for s in delta["snapshots"]]
    print(f"  tighter link gate -> {len(widths)} snapshots, widths {widths}")

    # 6. drill into the first merged snapshot
    snapshot_id = delta["snapshots"][0]["id"]
    detail = client.get(f"/sessions/{sid}/snapshots/{snapshot_id}").json()
    ind = detail["indicators"]
    print(f"  {snapshot_id}: avg speed {ind['avg_node_speed']:.2f}, "
          f"avg link distance {ind['avg_link_distance']:.2f}, "
          f"graph stability {ind['graph_stability']:.4f}")
    for trajectory in detail["trajectories"][:2]:
        node = matrix["nodes"][trajectory["node"]]["node_id"]
        speeds = [round(seg["speed"], 2) for seg in trajectory["segments"]]
        print(f"  {node} per-segment speeds: {speeds}")

    # 7. the tree digest doubles as an ETag: unchanged session -> 304
    etag = client.get(f"/sessions/{sid}").headers["etag"]
    status = client.get(f"/sessions/{sid}", headers={"If-None-Match": etag}).status_code
    print(f"  conditional GET with current ETag -> {status}")
