"""JSON presentation files: parsing with located diagnostics, and dumping.

See ``data/presentation.schema.json`` for the format.  Coefficients are
implicit: each term record contributes one F2 summand, and a record repeated
twice cancels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import jsonschema

from .ainf import (
    LEFT,
    AInfAlgebra,
    AInfCoalgebra,
    AInfComodule,
    AInfModule,
    Basis,
    PresentationError,
    cyclic_group,
    exterior_algebra_rank1,
    trivial_module,
    verify_algebra_relations,
    verify_coalgebra_relations,
    verify_comodule_relations,
    verify_module_relations,
)

Structure = Union[AInfAlgebra, AInfModule, AInfCoalgebra, AInfComodule]

BUILTINS = ("z2", "z3", "trivial", "exterior1")


def builtin_algebra(name: str) -> AInfAlgebra:
    if name == "z2":
        return cyclic_group(2)
    if name == "z3":
        return cyclic_group(3)
    if name == "trivial":
        return cyclic_group(1)
    if name == "exterior1":
        return exterior_algebra_rank1(1)
    raise PresentationError(f"unknown example {name!r}; choose from {', '.join(BUILTINS)}")


def builtin_example(name: str):
    a = builtin_algebra(name)
    return a, trivial_module(a, LEFT)


def schema() -> Dict[str, Any]:
    return json.loads(resources.files("ainftate").joinpath("data/presentation.schema.json").read_text())


def data_path(name: str) -> Path:
    return Path(str(resources.files("ainftate").joinpath(f"data/{name}")))


@dataclass
class Presentation:
    kind: str
    structure: Structure
    algebra: Optional[Structure] = None
    source: str = ""


def _where(path) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<root>"


def _basis(doc: dict) -> Basis:
    names, degrees = [], []
    for entry in doc["basis"]:
        if isinstance(entry, str):
            names.append(entry)
            degrees.append(0)
        else:
            names.append(entry["name"])
            degrees.append(entry.get("degree", 0))
    return Basis(tuple(names), tuple(degrees))


def _lookup(basis: Basis, label: str, where: str) -> int:
    try:
        return basis.index(label)
    except PresentationError:
        raise PresentationError(f"{where}: unknown label {label!r}") from None


def _check_arity(rec: dict, n: int, where: str) -> None:
    if "arity" in rec and rec["arity"] != n:
        raise PresentationError(f"{where}.arity: declared {rec['arity']} but {n} inputs given")


def structure_from_dict(doc: dict, base_dir: Path = Path("."), source: str = "<memory>", verify: bool = True,
                        k_check: int = 4) -> Presentation:
    """Build (and by default verify) a structure from a parsed JSON document."""
    try:
        jsonschema.validate(doc, schema())
    except jsonschema.ValidationError as err:
        raise PresentationError(f"{source}: {_where(err.absolute_path)}: {err.message}") from None
    kind = doc["kind"]
    basis = _basis(doc)
    name = doc.get("name", "")
    terms = doc.get("terms", [])
    algebra = None
    if kind in ("module", "comodule"):
        ref = doc["algebra"] if kind == "module" else doc["coalgebra"]
        if isinstance(ref, str):
            algebra = parse_presentation(base_dir / ref, verify=verify, k_check=k_check).structure
        else:
            algebra = structure_from_dict(ref, base_dir, f"{source}:{'algebra' if kind == 'module' else 'coalgebra'}", verify, k_check).structure
    parsed: List = []
    for n, rec in enumerate(terms):
        where = f"{source}: terms[{n}]"
        if kind == "algebra":
            ins = [_lookup(basis, x, where + ".inputs") for x in rec["inputs"]]
            _check_arity(rec, len(ins), where)
            parsed.append((ins, _lookup(basis, rec["output"], where + ".output")))
        elif kind == "coalgebra":
            outs = [_lookup(basis, x, where + ".outputs") for x in rec["outputs"]]
            _check_arity(rec, len(outs), where)
            parsed.append((_lookup(basis, rec["input"], where + ".input"), outs))
        elif kind == "module":
            ins = [_lookup(algebra.basis, x, where + ".inputs") for x in rec["inputs"]]
            _check_arity(rec, len(ins), where)
            parsed.append((ins, _lookup(basis, rec["module"], where + ".module"), _lookup(basis, rec["output"], where + ".output")))
        else:
            letters = [_lookup(algebra.basis, x, where + ".letters") for x in rec["letters"]]
            _check_arity(rec, len(letters), where)
            parsed.append((_lookup(basis, rec["input"], where + ".input"), letters, _lookup(basis, rec["output"], where + ".output")))
    if kind == "algebra":
        aug = doc.get("augmentation")
        aug_idx = None if aug is None else [_lookup(basis, x, f"{source}: augmentation") for x in aug]
        s: Structure = AInfAlgebra.from_terms(basis, parsed, aug_idx, name)
        rep = verify_algebra_relations(s, k_check) if verify else None
    elif kind == "coalgebra":
        co = doc.get("augmentation")
        co_idx = None if co is None else [_lookup(basis, x, f"{source}: augmentation") for x in co]
        s = AInfCoalgebra.from_terms(basis, parsed, co_idx, name)
        rep = verify_coalgebra_relations(s, k_check) if verify else None
    elif kind == "module":
        s = AInfModule.from_terms(doc["side"], basis, parsed, name)
        rep = verify_module_relations(algebra, s, k_check) if verify else None
    else:
        s = AInfComodule.from_terms(doc["side"], basis, parsed, name)
        rep = verify_comodule_relations(algebra, s, k_check) if verify else None
    if rep is not None and not rep.ok:
        raise PresentationError(
            f"{source}: {rep.structure} relations fail on {rep.witness} (residual {list(rep.residual)})",
            witness=rep.witness,
        )
    return Presentation(kind, s, algebra, source)


def parse_presentation(path: Union[str, Path], verify: bool = True, k_check: int = 4) -> Presentation:
    """Read a JSON presentation; errors carry the file, line/column or field path."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as err:
        raise PresentationError(f"{path}: cannot read ({err.strerror})") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise PresentationError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from None
    return structure_from_dict(doc, path.parent, str(path), verify, k_check)


def _basis_doc(b: Basis) -> list:
    if not b.graded:
        return list(b.names)
    return [{"name": n, "degree": d} for n, d in zip(b.names, b.degrees)]


def dump_structure(s: Structure, over: Optional[Structure] = None, algebra_ref: Any = None) -> dict:
    """Inverse of :func:`structure_from_dict`; ``over`` is the acting (co)algebra for (co)modules."""
    if isinstance(s, AInfAlgebra):
        doc: Dict[str, Any] = {"kind": "algebra", "name": s.name, "basis": _basis_doc(s.basis)}
        if s.augmentation is not None:
            doc["augmentation"] = list(s.basis.show(sorted(s.augmentation)))
        doc["terms"] = [
            {"arity": len(ins), "inputs": list(s.basis.show(ins)), "output": s.basis.names[o]} for ins, o in s.terms()
        ]
        return doc
    if isinstance(s, AInfCoalgebra):
        doc = {"kind": "coalgebra", "name": s.name, "basis": _basis_doc(s.basis)}
        if s.coaugmentation is not None:
            doc["augmentation"] = list(s.basis.show(sorted(s.coaugmentation)))
        doc["terms"] = [
            {"arity": len(t), "input": s.basis.names[c], "outputs": list(s.basis.show(t))} for c, t in s.terms()
        ]
        return doc
    if over is None:
        raise ValueError("dumping a (co)module needs the acting structure")
    ref = algebra_ref if algebra_ref is not None else dump_structure(over)
    if isinstance(s, AInfModule):
        return {
            "kind": "module",
            "name": s.name,
            "side": s.side,
            "algebra": ref,
            "basis": _basis_doc(s.basis),
            "terms": [
                {"arity": len(a), "inputs": list(over.basis.show(a)), "module": s.basis.names[x], "output": s.basis.names[o]}
                for a, x, o in s.terms()
            ],
        }
    return {
        "kind": "comodule",
        "name": s.name,
        "side": s.side,
        "coalgebra": ref,
        "basis": _basis_doc(s.basis),
        "terms": [
            {"arity": len(l), "input": s.basis.names[x], "letters": list(over.basis.show(l)), "output": s.basis.names[o]}
            for x, l, o in s.terms()
        ],
    }
