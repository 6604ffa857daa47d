"""The shipped diagram corpus.

Each JSON file holds a diagram plus a little metadata:

* ``name``: file stem;
* ``family``: diagrams with the same family are related by Reidemeister
  moves (used by the invariance suite);
* ``tags``: any of knot, link, singular, twist, reducible, fi, variant;
* optional ``r`` (twist index) and ``c0`` (the reducible crossing).

``build_corpus`` regenerates the files from the generators in
:mod:`cruxkh.diagram`; the tests load the frozen files.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional

from .diagram import (Diagram, braid_closure, connected_sum_crossing, from_obj, hopf, kink,
                      make_double, reidemeister_variants, to_obj, trefoil, twist_family,
                      twist_knot, unknot)

MAX_VARIANT_VERTICES = 8


@dataclass
class Entry:
    name: str
    diagram: Diagram
    family: Optional[str] = None
    tags: List[str] = field(default_factory=list)
    extra: Dict[str, int] = field(default_factory=dict)

    def to_obj(self) -> dict:
        obj = to_obj(self.diagram)
        obj.update({"name": self.name, "family": self.family, "tags": sorted(self.tags)})
        obj.update(self.extra)
        return obj


def _entries() -> List[Entry]:
    out: List[Entry] = []

    def add(name, d, family=None, tags=(), **extra):
        tags = list(tags)
        if d.doubles:
            tags.append("singular")
        elif d.components() == 1:
            tags.append("knot")
        else:
            tags.append("link")
        out.append(Entry(name, d, family, tags, extra))

    add("unknot", unknot(1), "unknot")
    add("unlink2", unknot(2), "unlink2")
    for sign in ("pos", "neg"):
        for side in ("left", "right"):
            add(f"kink_{sign}_{side}", kink(sign, side), "unknot")
    add("hopf_pos", hopf("pos"), "hopf_pos")
    add("hopf_neg", hopf("neg"), "hopf_neg")
    add("trefoil_left", trefoil("left"), "trefoil_left")
    add("trefoil_right", trefoil("right"), "trefoil_right")
    add("figure_eight", twist_knot(2), "figure_eight")
    for r in range(6):
        add(f"twist_G{r}", twist_family(r), None, ["twist"], r=r)
        fam = {0: "unknot", 1: "trefoil_left", 2: "figure_eight"}.get(r, f"twist_D{r}")
        add(f"twist_D{r}", twist_knot(r), fam, ["twist"], r=r)
    for name, a, b in (("reducible_trefoils", trefoil("left"), trefoil("right")),
                       ("reducible_fig8_hopf", twist_knot(2), hopf("pos")),
                       ("reducible_kink_trefoil", kink("pos"), trefoil("right"))):
        d, c0 = connected_sum_crossing(a, b, "neg")
        add(name, d, None, ["reducible"], c0=c0)
    add("fi_pos", make_double(kink("pos", "right"), 0), None, ["fi"])
    add("fi_neg", make_double(kink("neg", "left"), 0), None, ["fi"])
    add("trefoil_dbl", make_double(trefoil("left"), 1), None)
    add("figure_eight_dbl", make_double(twist_knot(2), 0), None)
    add("braid_dbl", make_double(braid_closure([1, 1, 2, -1, 2, 2], 3), 0), None)
    sing = braid_closure([1, 2, 1, -2], 3, doubles=(3,))
    add("singular_braid", sing, "singular_braid")
    # Reidemeister variants
    for base_name, base in (("trefoil_left", trefoil("left")), ("hopf_pos", hopf("pos")),
                            ("figure_eight", twist_knot(2)), ("singular_braid", sing)):
        for k, v in enumerate(reidemeister_variants(base)):
            if len(v.vertices) <= MAX_VARIANT_VERTICES:
                add(f"{base_name}_var{k}", v, base_name, ["variant"])
    return out


def build_corpus(directory) -> List[str]:
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    names = []
    for e in _entries():
        (path / f"{e.name}.json").write_text(json.dumps(e.to_obj(), sort_keys=True, indent=1) + "\n",
                                             encoding="utf-8")
        names.append(e.name)
    return names


def _entry_from_obj(obj: dict) -> Entry:
    extra = {k: obj[k] for k in ("r", "c0") if k in obj}
    return Entry(obj["name"], from_obj(obj), obj.get("family"), list(obj.get("tags", [])), extra)


def load_dir(directory) -> List[Entry]:
    out = []
    for p in sorted(Path(directory).glob("*.json")):
        out.append(_entry_from_obj(json.loads(p.read_text(encoding="utf-8"))))
    return out


def load_corpus(tag: Optional[str] = None) -> List[Entry]:
    """Entries of the shipped corpus, sorted by name, optionally filtered by tag."""
    root = resources.files("cruxkh") / "corpus"
    out = []
    for p in sorted(root.iterdir(), key=lambda x: x.name):
        if p.name.endswith(".json"):
            out.append(_entry_from_obj(json.loads(p.read_text(encoding="utf-8"))))
    if tag is not None:
        out = [e for e in out if tag in e.tags]
    return out


def corpus_dir() -> Path:
    return Path(str(resources.files("cruxkh") / "corpus"))
