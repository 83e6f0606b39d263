"""JSON (de)serialization for lattices, tables, ideals, and verdicts."""

from __future__ import annotations

import json
from typing import Any

from .exactla import AbelianInvariants, IntMatrix
from .groups import GroupSpec, cyclic, dihedral
from .lattices import GLattice, LatticeError
from .cohomology import CohomologyTable
from .cyclotomic import IdealHNF, ideal_from_rows
from .steinitz import ClassTable, SteinitzClassRep


def matrix_to_json(m: IntMatrix) -> list:
    return [list(row) for row in m.data]


def matrix_from_json(data, cols: int | None = None) -> IntMatrix:
    if not data and cols is None:
        raise LatticeError("empty matrix needs an explicit column count")
    return IntMatrix(data, cols=cols) if not data else IntMatrix(data)


def group_to_json(g: GroupSpec) -> dict:
    return {"kind": g.kind, "n": g.n}


def group_from_json(data: dict) -> GroupSpec:
    kind = data.get("kind")
    n = data.get("n")
    if kind == "dihedral":
        return dihedral(int(n))
    if kind == "cyclic":
        return cyclic(int(n))
    raise LatticeError(f"unknown group kind {kind!r}")


def lattice_to_json(m: GLattice, annotations: dict | None = None) -> dict:
    out: dict[str, Any] = {
        "group": group_to_json(m.group),
        "rank": m.rank,
        "sigma": matrix_to_json(m.sigma),
        "tau": matrix_to_json(m.tau) if m.tau is not None else None,
    }
    if annotations:
        out["annotations"] = annotations
    return out


def lattice_from_json(data: dict) -> tuple[GLattice, dict]:
    g = group_from_json(data["group"])
    rank = int(data["rank"])
    sigma = matrix_from_json(data["sigma"], cols=rank)
    tau = None
    if data.get("tau") is not None:
        tau = matrix_from_json(data["tau"], cols=rank)
    lat = GLattice(g, sigma, tau)
    raw = data.get("annotations") or {}
    annotations = dict(raw)
    if "non_principal_ideal" in raw:
        annotations["non_principal_ideal"] = ideal_from_json(raw["non_principal_ideal"])
    return lat, annotations


def map_to_json(matrix: IntMatrix, source: str, target: str) -> dict:
    return {"matrix": matrix_to_json(matrix), "source": source, "target": target}


def invariants_to_json(inv: AbelianInvariants) -> dict:
    return {"torsion": list(inv.torsion), "free_rank": inv.free_rank}


def invariants_from_json(data: dict) -> AbelianInvariants:
    return AbelianInvariants(tuple(data["torsion"]), int(data["free_rank"]))


def table_to_json(t: CohomologyTable) -> dict:
    classes = {}
    for label, hm1, h0, h1v in t.entries:
        classes[label] = {
            "hminus1": invariants_to_json(hm1),
            "h0": invariants_to_json(h0),
            "h1": invariants_to_json(h1v),
        }
    return {"lattice": t.lattice_id, "classes": classes}


def ideal_to_json(i: IdealHNF) -> dict:
    return {
        "p": i.p,
        "real_subfield": i.real_subfield,
        "basis": matrix_to_json(i.basis),
    }


def ideal_from_json(data: dict) -> IdealHNF:
    return ideal_from_rows(
        int(data["p"]),
        IntMatrix(data["basis"]),
        bool(data.get("real_subfield", False)),
    )


def steinitz_to_json(rep: SteinitzClassRep) -> dict:
    return {
        "ideal": ideal_to_json(rep.ideal),
        "known_trivial": rep.known_trivial,
        "generator": list(rep.generator) if rep.generator is not None else None,
    }


def class_table_to_json(t: ClassTable) -> list:
    return [
        {"p": p, "h": h, "h_plus": hp, "source": src} for p, h, hp, src in t.entries
    ]


def class_table_from_json(data) -> ClassTable:
    entries = []
    for row in data:
        entries.append(
            (int(row["p"]), row.get("h"), int(row["h_plus"]), row.get("source", ""))
        )
    return ClassTable(entries=tuple(entries))


def dump(obj: dict | list, path: str | None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def load(path: str):
    with open(path) as fh:
        return json.load(fh)
