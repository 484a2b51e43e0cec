"""Generate doubly-periodic unstructured triangle meshes of the unit square.

Writes gmsh MSH ASCII v2.2 files `meshes/periodic_<k>.msh` for target element
sizes 1/k. Boundary nodes on opposite sides match exactly, as required by the
reader in crates/core/src/mesh/msh.rs.

    python3 scripts/gen_periodic_meshes.py [k ...]
"""
import sys
from pathlib import Path

import gmsh


def generate(k: int, out: Path) -> int:
    gmsh.initialize()
    gmsh.option.setNumber("General.Terminal", 0)
    gmsh.model.add(f"periodic_{k}")
    lc = 1.0 / k
    occ = gmsh.model.geo
    p = [occ.addPoint(x, y, 0, lc) for x, y in [(0, 0), (1, 0), (1, 1), (0, 1)]]
    bottom = occ.addLine(p[0], p[1])
    right = occ.addLine(p[1], p[2])
    top = occ.addLine(p[3], p[2])
    left = occ.addLine(p[0], p[3])
    loop = occ.addCurveLoop([bottom, right, -top, -left])
    surf = occ.addPlaneSurface([loop])
    occ.synchronize()
    shift_x = [1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1]
    shift_y = [1, 0, 0, 0, 0, 1, 0, 1, 0, 0, 1, 0, 0, 0, 0, 1]
    gmsh.model.mesh.setPeriodic(1, [right], [left], shift_x)
    gmsh.model.mesh.setPeriodic(1, [top], [bottom], shift_y)
    gmsh.model.addPhysicalGroup(2, [surf], 1)
    gmsh.option.setNumber("Mesh.Algorithm", 5)  # Delaunay
    gmsh.model.mesh.generate(2)
    gmsh.option.setNumber("Mesh.MshFileVersion", 2.2)
    gmsh.option.setNumber("Mesh.Binary", 0)
    gmsh.option.setNumber("Mesh.SaveAll", 0)
    gmsh.write(str(out))
    _, tags, _ = gmsh.model.mesh.getElements(2)
    count = sum(len(t) for t in tags)
    gmsh.finalize()
    return count


if __name__ == "__main__":
    root = Path(__file__).resolve().parent.parent / "meshes"
    root.mkdir(exist_ok=True)
    ks = [int(a) for a in sys.argv[1:]] or [8, 12, 16, 24, 32]
    for k in ks:
        n = generate(k, root / f"periodic_{k}.msh")
        print(f"target 1/{k}: {n} triangles")
