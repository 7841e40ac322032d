"""Two fields with the same undirected separatrix graph.

z^3/(z-1) has one saddle and one elliptic point joined by four edges;
i(z^2-1)(z^2-4)/(z^2+9) has two saddles joined by four heteroclinic edges.
Forget colors and directions and the graphs agree; the face classes do not.

    python demos/twins.py [outdir]
"""
import sys
from pathlib import Path

from seplab.admissibility import check_admissible
from seplab.io import parse_gaussian
from seplab.render import render_portrait
from seplab.vf.assemble import extract
from seplab.vf.field import RationalVF

FIELDS = {
    "elliptic_twin": (["1", "0", "0", "0"], ["1", "-1"]),
    "center_twin": (["i", "0", "-5i", "0", "4i"], ["1", "0", "9"]),
}


def main(outdir="."):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    for name, (num, den) in FIELDS.items():
        vf = RationalVF.from_coeffs([parse_gaussian(c) for c in num], [parse_gaussian(c) for c in den], exact=True)
        sg = extract(vf)
        g = sg.graph
        report = check_admissible(g)
        print(f"{name}: {len(g.white)} white, {len(g.black)} black, {len(g.edges)} edges, "
              f"faces {report.counts()}, admissible={report.verdict}")
        (out / f"{name}.svg").write_text(render_portrait(sg.sidecar(), flow_lines=8, title=name))
    print(f"portraits written to {out.resolve()}")


if __name__ == "__main__":
    main(*sys.argv[1:])
