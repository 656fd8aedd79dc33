#!/usr/bin/env python3
"""Regenerates the 10-sample phonological fixture under tests/golden/phono/.

The committed report.json / report.tsv were counted by hand from the tables
below; edit both together or the golden test will (rightly) fail.
"""
import json
import os

# label, session, scene, consultant, frame_end, then per-frame columns:
# dh_handshape, ndh_handshape, dh_orientation, ndh_orientation,
# dh_movement, ndh_movement, mouth_opening
SAMPLES = [
    ("BOOK", "ses1", "sc1", "c1", 40, [
        ("B", "B", "front", "front", "none", "none", 0.10),
        ("B", "B", "front", "front", "left", "left", 0.20),
        ("B", "B", "front", "front", "left", "left", 0.20),
    ]),
    ("BOOK", "ses1", "sc2", "c1", 20, [
        ("B", "B", "front", "front", "none", "none", 0.10),
        ("B", "B", "up", "front", "right", "none", 0.10),
    ]),
    ("BOOK", "ses2", "sc1", "c2", 60, [
        ("B", "B", "up", "down", "none", "none", 0.30),
        ("B", "B", "up", "down", "left_up", "none", 0.30),
        ("open-B", "B", "up", "down", "left_up", "none", 0.20),
        ("open-B", "B", "up", "down", "right_down", "left", 0.10),
    ]),
    ("IDEA", "ses1", "sc3", "c1", 0, [
        ("1", "5", "none", "down", "none", "none", 0.00),
    ]),
    ("IDEA", "ses2", "sc2", "c2", 20, [
        ("1", "5", "up", "down", "none", "none", 0.10),
        ("1", "5", "front", "down", "up", "right", 0.40),
    ]),
    ("MOTHER", "ses1", "sc4", "c1", 40, [
        ("5", "5", "left", "none", "none", "none", 0.50),
        ("5", "5", "left", "none", "front", "none", 0.50),
        ("5", "5", "left", "none", "front", "none", 0.50),
    ]),
    ("MOTHER", "ses3", "sc1", "c3", 40, [
        ("5", "5", "left", "none", "none", "none", 0.50),
        ("5", "5", "left", "up", "front", "up", 0.40),
        ("open-8", "5", "front", "none", "left", "none", 0.30),
    ]),
    ("CHAIR", "ses2", "sc3", "c2", 20, [
        ("U", "U", "down", "down", "none", "none", 0.20),
        ("U", "U", "down", "down", "down", "down", 0.20),
    ]),
    ("WALK", "ses3", "sc2", "c3", 60, [
        ("3", "3", "front", "front", "none", "none", 0.10),
        ("3", "3", "front", "front", "right_front", "right_front", 0.20),
        ("3", "3", "front", "front", "left_body", "left_body", 0.30),
        ("3", "3", "front", "front", "right_front", "right_front", 0.40),
    ]),
    ("HOUSE", "ses1", "sc5", "c4", 0, [
        ("B", "B", "down", "down", "none", "none", 0.60),
    ]),
]

NAMES = ["dh_handshape", "ndh_handshape", "dh_orientation", "ndh_orientation",
         "dh_movement", "ndh_movement", "mouth_opening"]


def attr(value, score):
    return {"value": value, "score": score}


def main():
    out_dir = os.path.join(os.path.dirname(__file__), "phono")
    os.makedirs(out_dir, exist_ok=True)
    for i, (label, session, scene, consultant, end, rows) in enumerate(SAMPLES):
        frames = []
        for t, row in enumerate(rows):
            frame = {"frame_index": t}
            for name, value in zip(NAMES, row):
                if name == "mouth_opening":
                    frame[name] = attr(round(value, 6), 1.0)
                elif "movement" in name and t == 0:
                    frame[name] = attr(value, 0.0)   # no predecessor
                else:
                    frame[name] = attr(value, 1.0)
            frames.append(frame)
        doc = {
            "label": label, "session": session, "scene": scene,
            "consultant": consultant, "frame_start": 0, "frame_end": end,
            "frames": frames,
        }
        path = os.path.join(out_dir, f"sample_{i:02d}.json")
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    print(f"wrote {len(SAMPLES)} documents to {out_dir}")


if __name__ == "__main__":
    main()
