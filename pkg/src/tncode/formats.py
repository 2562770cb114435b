"""JSON files for stabilizer codes and code networks (all indices 0-based)."""

from __future__ import annotations

import json
from pathlib import Path

from .composition import CodeTensor, TensorNetworkCode, build_network
from .pauli import format_pauli
from .stabilizer import StabilizerCode, steane, trivial_code

CODE_KIND = "stabilizer-code"
NETWORK_KIND = "code-network"


def base_code(name: str) -> StabilizerCode:
    if name == "steane":
        return _STEANE
    if name == "trivial":
        return _TRIVIAL
    raise ValueError(f"unknown base code {name!r}")


_STEANE = steane()
_TRIVIAL = trivial_code(1)


def code_to_dict(code: StabilizerCode) -> dict:
    return {
        "kind": CODE_KIND,
        "n": code.n,
        "k": code.k,
        "stabilizers": [format_pauli(p) for p in code.stabilizers],
        "pure_errors": [format_pauli(p) for p in code.pure_errors],
        "logical_x": [format_pauli(p) for p in code.logical_x],
        "logical_z": [format_pauli(p) for p in code.logical_z],
    }


def code_from_dict(d: dict) -> StabilizerCode:
    code = StabilizerCode.from_strings(d["stabilizers"], d["pure_errors"], d["logical_x"], d["logical_z"])
    if code.n != d["n"] or code.k != d["k"]:
        raise ValueError(f"declared [[{d['n']},{d['k']}]] but operators give [[{code.n},{code.k}]]")
    return code


def network_to_dict(net: TensorNetworkCode, census: dict | None = None) -> dict:
    out = {
        "kind": NETWORK_KIND,
        "nodes": [{"code": t.name, "layer": t.layer} for t in net.nodes],
        "edges": [[list(a), list(b)] for a, b in net.edges],
        "boundary": [list(leg) for leg in net.boundary],
        "n": net.n,
        "k": net.k,
    }
    if census is not None:
        out["census"] = census
    return out


def network_from_dict(d: dict) -> TensorNetworkCode:
    tensors = [CodeTensor(base_code(node["code"]), node["code"], int(node.get("layer", 0))) for node in d["nodes"]]
    edges = [((int(a[0]), int(a[1])), (int(b[0]), int(b[1]))) for a, b in d["edges"]]
    net = build_network(tensors, edges)
    boundary = [tuple(leg) for leg in d.get("boundary", [])]
    if boundary and boundary != [tuple(leg) for leg in net.boundary]:
        raise ValueError("boundary order in the file does not match the rebuilt network")
    return net


def save_json(obj: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(obj, indent=1) + "\n")


def load(path: str | Path) -> StabilizerCode | TensorNetworkCode:
    """Read either file kind; codes without a ``kind`` field are accepted too."""
    d = json.loads(Path(path).read_text())
    if d.get("kind") == NETWORK_KIND or "nodes" in d:
        return network_from_dict(d)
    return code_from_dict(d)
