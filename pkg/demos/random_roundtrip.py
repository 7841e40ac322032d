"""Extract, check and compare degrees on random fields.

    python demos/random_roundtrip.py [count] [seed]
"""
import random
import sys
import time

from seplab.admissibility import check_admissible
from seplab.fixtures import random_field
from seplab.realization import degree_report
from seplab.vf.assemble import extract


def main(count=20, seed=1):
    rng = random.Random(int(seed))
    tally = {"admissible": 0, "unresolved": 0, "mismatch": 0}
    for i in range(int(count)):
        vf = random_field(rng, rng.randint(3, 8))
        t = time.perf_counter()
        sg = extract(vf)
        if not sg.resolved:
            tally["unresolved"] += 1
            print(f"{i:3d}  unresolved: {sg.diagnostics[0]}")
            continue
        report = check_admissible(sg.graph)
        deg = degree_report(sg.graph, report.face_set) if report.verdict else None
        ok = report.verdict and (deg.deg_P, deg.deg_Q) == (sg.vf.n, sg.vf.m)
        tally["admissible" if ok else "mismatch"] += 1
        print(f"{i:3d}  deg {sg.vf.n}/{sg.vf.m}  white {len(sg.graph.white)}  black {len(sg.graph.black)}  "
              f"faces {report.counts()}  {time.perf_counter() - t:.2f}s")
    print(tally)


if __name__ == "__main__":
    main(*sys.argv[1:])
