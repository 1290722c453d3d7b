"""Write the example input files used in the README and the CLI tests.

    python3 scripts/make_examples.py [outdir]     (default: scripts/data)
"""
import json
import sys
from pathlib import Path

from rigidtrace import bord, cyclic, fibration, gamma, smc
from rigidtrace.fincat import FinCat, FinFunctor


def examples():
    out = {}
    out["delta2.json"] = FinCat.poset(2).to_json()
    out["groupoid2.json"] = FinCat.contractible_groupoid(["a", "b"]).to_json()
    out["mat_f2_2.json"] = {"field": "Fp", "p": 2, "maxdim": 2}
    out["mat_q_3.json"] = {"field": "Q", "maxdim": 3}
    out["idempotent_smc.json"] = smc.idempotent_object_smc().to_json()
    out["f.json"] = [[1, 1], [0, 1]]
    out["g.json"] = [[1, "1/2", 0], [0, 2, 0], [3, 0, -1]]
    out["z2.json"] = gamma.FinCMonoid.cyclic(2).to_json()
    out["n2.json"] = gamma.FinCMonoid.truncated_naturals(2).to_json()
    out["disc_z3.json"] = {"monoid": gamma.FinCMonoid.cyclic(3).to_json()}
    out["q.json"] = cyclic.FDAlgebra.ground("Q").to_json()
    out["qxq.json"] = cyclic.FDAlgebra.product(2, "Q").to_json()
    out["dual_numbers.json"] = cyclic.FDAlgebra.dual_numbers("Q").to_json()
    out["e10.json"] = [[["1", "0"]]]
    out["conj.json"] = [[["1", "0"], ["-1", "0"]], [["0", "0"], ["0", "0"]]]

    # the projection of a two-object category onto Δ¹ over each vertex
    I = FinCat.poset(1)
    C0 = FinCat.discrete(["x", "y"])
    C1 = FinCat.terminal()
    Fu = FinFunctor(C0, C1, {"x": "*", "y": "*"},
                    {C0.identity("x"): C1.identity("*"), C0.identity("y"): C1.identity("*")})
    D = fibration.CatDiagram.build(I, {0: C0, 1: C1}, {I.mor("01"): Fu})
    out["diagram_delta1.json"] = D.to_json()

    G = bord.FinGroup.cyclic(3)
    out["z3_group.json"] = G.to_json()
    out["z3_rep2.json"] = {"field": "Q", "generators": {"1": [[0, -1], [1, -1]]}}
    out["trace_g1.json"] = bord.bord_trace(G, 1).to_json(G)
    out["strand_g1.json"] = bord.strand(G, "+", 1).to_json(G)
    zig = bord.compose(G, bord.tensor(bord.cap(G, "+"), bord.identity(G, "+")),
                       bord.tensor(bord.identity(G, "+"), bord.cup(G, "+")))
    out["zigzag.json"] = zig.to_json(G)
    return out


def main(argv):
    outdir = Path(argv[1]) if len(argv) > 1 else Path(__file__).parent / "data"
    outdir.mkdir(parents=True, exist_ok=True)
    for name, data in examples().items():
        (outdir / name).write_text(json.dumps(data, indent=1) + "\n")
    print(f"wrote {len(examples())} files to {outdir}")


if __name__ == "__main__":
    main(sys.argv)
