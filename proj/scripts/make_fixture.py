#!/usr/bin/env python3
"""Writes the synthetic two-recording fixture used by the tests.

Both recordings follow the same 400-bar plan: a slow introduction (bars
1-34) and a fast movement with a few ritardandi and a closing push. Output
uses the cumulative-timestamp schema, with a bar 0 row anchoring each clock.
"""
import math
import random
import sys
from pathlib import Path

BEATS = 3


def tempo_plan(bar, intro, allegro, rng):
    if bar <= 34:
        return intro + 2.5 * math.sin(bar / 5.0) + rng.gauss(0, 1.2)
    bpm = allegro + 6.0 * math.sin((bar - 35) / 11.0) + rng.gauss(0, 4.0)
    for centre, depth in ((158, 45.0), (254, 55.0), (366, 40.0)):
        bpm -= depth * math.exp(-((bar - centre) / 3.0) ** 2)
    if bar >= 380:
        bpm += 0.9 * (bar - 380)
    return bpm


def recording(rec_id, start_ms, intro, allegro, seed):
    rng = random.Random(seed)
    rows = [(rec_id, 0, BEATS, start_ms)]
    t = float(start_ms)
    for bar in range(1, 401):
        bpm = tempo_plan(bar, intro, allegro, rng)
        t += BEATS * 60000.0 / bpm
        rows.append((rec_id, bar, BEATS, round(t)))
    return rows


def main(out_dir):
    out = Path(out_dir)
    rows = recording("casals", 1200, 37.0, 138.0, 1930)
    rows += recording("isserlis", 850, 41.0, 144.0, 2012)
    with open(out / "two_recordings.csv", "w", newline="\n") as f:
        f.write("recording_id,bar_index,n_beats,timestamp_ms\n")
        for r in rows:
            f.write(",".join(str(v) for v in r) + "\n")
    (out / "op5n1_sections.csv").write_text(
        "name,start_bar,end_bar\n"
        "Introduction,1,34\n"
        "Exposition,35,159\n"
        "Development,160,255\n"
        "Recapitulation,256,367\n"
        "Coda,368,400\n")
    (out / "meta.csv").write_text(
        "recording_id,label,year,color\n"
        "casals,Casals (1930-39),1930-1939,#2166ac\n"
        "isserlis,Isserlis (2012),2012,#d6604d\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "tests" / "data")
