"""Command line: homology tables, verification suites, twist-knot comparison.

Exit codes: 0 success, 1 a check failed, 2 bad input (validation or IO),
3 conflicting flags.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import diagram as dg
from .corpus import Entry, corpus_dir, load_dir
from .exactalg import QQ, ZZ, Ring
from .frobenius import FrobeniusParams, verify_bar_natan_relations

PARAM_GRID = [(0, 0), (1, 0), (0, 1), (2, 1)]
SUITES = ("relations", "exactness", "cone-xi", "invariance", "skein", "jones")

Check = Tuple[str, bool, str]


class FlagConflict(Exception):
    pass


def digest(d: dg.Diagram) -> str:
    return hashlib.sha256(dg.serialize(d).encode()).hexdigest()[:16]


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CRUXKH_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn: Callable, items: Sequence) -> List:
    """Map over corpus entries, in parallel when CRUXKH_THREADS > 1; results keep input order."""
    n = min(_threads(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# homology

def homology_rows(d: dg.Diagram, params: FrobeniusParams, graded: bool) -> List[dict]:
    from .khovanov import kh_complex
    c = kh_complex(d, params)
    rows = []
    if graded:
        for (i, j), g in sorted(c.bigraded_homology(params.ring).items(), key=lambda kv: (kv[0][0], -kv[0][1])):
            rows.append({"i": i, "j": j, "free_rank": g.free_rank, "torsion": list(g.torsion)})
    else:
        for i, g in sorted(c.homology(params.ring).items()):
            rows.append({"i": i, "free_rank": g.free_rank, "torsion": list(g.torsion)})
    return rows


def _params_from(args) -> Tuple[FrobeniusParams, bool]:
    try:
        ring = Ring.parse(args.ring)
    except ValueError as exc:
        raise dg.MalformedInput(str(exc)) from exc
    params = FrobeniusParams(args.h, args.t, ring)
    if args.graded and not params.graded:
        raise FlagConflict("--graded needs h = t = 0")
    graded = params.graded if args.graded is None or args.graded else False
    return params, graded


def cmd_homology(args) -> int:
    d = dg.load(args.diagram)
    params, graded = _params_from(args)
    rows = homology_rows(d, params, graded)
    cols = ["i", "j", "free_rank", "torsion"] if graded else ["i", "free_rank", "torsion"]
    out = ["\t".join(cols)]
    for r in rows:
        out.append("\t".join(json.dumps(r[c]) if c == "torsion" else str(r[c]) for c in cols))
    print("\n".join(out))
    if args.json:
        report = {"command": "homology", "diagram": digest(d),
                  "parameters": {"ring": str(params.ring), "h": params.h, "t": params.t, "graded": graded},
                  "results": rows, "pass": True}
        _write_json(args.json, report)
    return 0


def _write_json(target: str, obj) -> None:
    text = json.dumps(obj, sort_keys=True, indent=1)
    if target == "-":
        print(text)
    else:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


# ---------------------------------------------------------------------------
# verification suites; each returns a list of (name, ok, detail)

def suite_relations(entries: Sequence[Entry]) -> List[Check]:
    out = []
    for ring in (ZZ, QQ, Ring.prime_field(2), Ring.prime_field(3)):
        for h, t in PARAM_GRID:
            res = verify_bar_natan_relations(FrobeniusParams(h, t, ring))
            bad = [k for k, ok in res.items() if not ok]
            out.append((f"relations {ring} h={h} t={t}", not bad, ",".join(bad)))
    return out


def _singular(entries):
    return [e for e in entries if len(e.diagram.doubles) == 1]


def check_exactness(e: Entry) -> List[Check]:
    from .crux import CruxSetup, crux_multicomplex, row_sequences
    out = []
    for h, t in PARAM_GRID:
        p = FrobeniusParams(h, t)
        try:
            cs = CruxSetup(e.diagram, p)
            rows = row_sequences(e.diagram, p, cs)
            crux_multicomplex(e.diagram, p, cs)
            out.append((f"exactness {e.name} h={h} t={t}", True, f"{len(rows)} rows"))
        except AssertionError as exc:
            out.append((f"exactness {e.name} h={h} t={t}", False, str(exc)))
    return out


def check_cone_xi(e: Entry) -> List[Check]:
    from .crux import verify_cone_xi
    out = []
    for p in (FrobeniusParams(0, 0), FrobeniusParams(0, 0, QQ), FrobeniusParams(2, 1)):
        try:
            c = verify_cone_xi(e.diagram, p)
            ok = c.homotopy_ok and c.homology_equal and c.bigraded_equal is not False \
                and c.beta_alpha_ok is not False
            out.append((f"cone-xi {e.name} {p.ring} h={p.h} t={p.t}", ok,
                        f"homotopy={c.homotopy_ok} iso={c.beta_alpha_ok} H={c.homology_equal} "
                        f"bigraded={c.bigraded_equal}"))
        except (AssertionError, ValueError) as exc:
            out.append((f"cone-xi {e.name} {p.ring} h={p.h} t={p.t}", False, str(exc)))
    return out


def _family_homology(e: Entry):
    from .khovanov import kh_complex
    return kh_complex(e.diagram).bigraded_homology(ZZ)


def suite_invariance(entries: Sequence[Entry]) -> List[Check]:
    fams: Dict[str, List[Entry]] = {}
    for e in entries:
        if e.family:
            fams.setdefault(e.family, []).append(e)
    groups = [g for _, g in sorted(fams.items()) if len(g) > 1]
    flat = [e for g in groups for e in g]
    hs = dict(zip((e.name for e in flat), _map(_family_homology, flat)))
    out = []
    for g in groups:
        ref = hs[g[0].name]
        for e in g[1:]:
            out.append((f"invariance {g[0].family}: {e.name}", hs[e.name] == ref, ""))
    return out


def check_skein(e: Entry) -> List[Check]:
    from .khovanov import phi_hat, skein_cone
    from .mcomplex import homology_iso
    from .smoothing import crux_maps
    d = e.diagram
    out = []
    if "reducible" in e.tags:
        c0 = e.extra["c0"]
        crux = crux_maps(dg.make_double(d, c0))
        f = phi_hat(d, c0)
        ok = not crux and homology_iso(f, ZZ) and f.preserves_labels()
        out.append((f"skein reducible {e.name}", ok, f"crux={len(crux)}"))
        return out
    for vid in d.ids:
        try:
            skein_cone(d, vid, FrobeniusParams())
            out.append((f"skein cone {e.name}@{vid}", True, ""))
        except AssertionError as exc:
            out.append((f"skein cone {e.name}@{vid}", False, str(exc)))
    return out


def check_jones(e: Entry) -> List[Check]:
    from .jones import crux_jones_check, jones, kauffman_jones, unnormalized_jones_state_sum, QUANTUM_TWO, zeta3_check
    d = e.diagram
    out = []
    if d.doubles:
        if len(d.doubles) == 1:
            for ring in (QQ, Ring.prime_field(2)):
                rep = crux_jones_check(d, ring)
                out.append((f"jones crux {e.name} {ring}", rep.equal, f"lhs={rep.lhs}"))
        return out
    k = kauffman_jones(d)
    out.append((f"jones oracle {e.name}", jones(d) == k == unnormalized_jones_state_sum(d).exact_div(QUANTUM_TWO),
                str(k)))
    if d.components() == 1:
        out.append((f"jones zeta3 {e.name}", zeta3_check(d).divisible, ""))
    return out


PER_ENTRY = {
    "exactness": (check_exactness, _singular),
    "cone-xi": (check_cone_xi, _singular),
    "skein": (check_skein, lambda es: [e for e in es if not e.diagram.doubles and e.diagram.vertices]),
    "jones": (check_jones, lambda es: list(es)),
}


def run_suite(name: str, entries: Sequence[Entry]) -> List[Check]:
    if name == "relations":
        return suite_relations(entries)
    if name == "invariance":
        return suite_invariance(entries)
    fn, pick = PER_ENTRY[name]
    return [c for chunk in _map(fn, pick(entries)) for c in chunk]


def cmd_verify(args) -> int:
    try:
        entries = load_dir(args.corpus) if args.corpus else load_dir(corpus_dir())
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot read corpus: {exc}", file=sys.stderr)
        return 2
    if args.corpus and not entries and args.suite != "relations":
        print(f"error: no diagrams in {args.corpus}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    checks = run_suite(args.suite, entries)
    failed = [c for c in checks if not c[1]]
    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'}\t{name}" + (f"\t{detail}" if detail else ""))
    print(f"{args.suite}: {len(checks) - len(failed)}/{len(checks)} passed")
    print(f"elapsed {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    if args.json:
        _write_json(args.json, {"command": f"verify {args.suite}", "results": [
            {"check": n, "pass": ok, "detail": dt} for n, ok, dt in checks], "pass": not failed})
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# twist knots

def twist_report(r: int, params: FrobeniusParams) -> dict:
    from .crux import twist_knot_model, twist_singular_model
    from .khovanov import kh_complex
    ring = params.ring
    direct = kh_complex(dg.twist_knot(r), params, check=False)
    model = twist_knot_model(r, params)
    g_direct = kh_complex(dg.twist_family(r), params, check=False)
    g_model = twist_singular_model(r, params)
    res = {
        "D": {"direct": _fmt(direct.homology(ring)), "model": _fmt(model.homology(ring))},
        "G": {"direct": _fmt(g_direct.homology(ring)), "model": _fmt(g_model.homology(ring))},
    }
    ok = res["D"]["direct"] == res["D"]["model"] and res["G"]["direct"] == res["G"]["model"]
    if params.graded:
        bd, bm = direct.bigraded_homology(ring), model.bigraded_homology(ring)
        gd, gm = g_direct.bigraded_homology(ring), g_model.bigraded_homology(ring)
        ok = ok and bd == bm and gd == gm
        res["D"]["bigraded"] = _fmt(bd)
        res["G"]["bigraded"] = _fmt(gd)
    res["pass"] = ok
    return res


def _fmt(h: dict) -> dict:
    return {",".join(map(str, k)) if isinstance(k, tuple) else str(k): str(g) for k, g in sorted(h.items())}


def cmd_twist(args) -> int:
    if args.r < 0:
        print("error: r must be non-negative", file=sys.stderr)
        return 2
    try:
        params, _ = _params_from(args)
    except dg.MalformedInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rep = twist_report(args.r, params)
    print(f"D({args.r}) direct\t{json.dumps(rep['D']['direct'], sort_keys=True)}")
    print(f"D({args.r}) model\t{json.dumps(rep['D']['model'], sort_keys=True)}")
    print(f"G({args.r}) direct\t{json.dumps(rep['G']['direct'], sort_keys=True)}")
    print(f"G({args.r}) model\t{json.dumps(rep['G']['model'], sort_keys=True)}")
    if args.check_main_b:
        print("PASS" if rep["pass"] else "FAIL")
    if args.json:
        _write_json(args.json, {"command": "twist", "r": args.r,
                                "parameters": {"ring": str(params.ring), "h": params.h, "t": params.t},
                                "results": rep, "pass": rep["pass"]})
    return 0 if rep["pass"] or not args.check_main_b else 1


# ---------------------------------------------------------------------------

def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ring", default="z", help="z, q or fp:<prime>")
    p.add_argument("--h", type=int, default=0)
    p.add_argument("--t", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cruxkh", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("homology", help="homology table of a diagram file")
    p.add_argument("diagram")
    _add_params(p)
    p.add_argument("--graded", dest="graded", action="store_true", default=None,
                   help="bigraded table (needs h = t = 0; default when h = t = 0)")
    p.add_argument("--ungraded", dest="graded", action="store_false")
    p.add_argument("--json", metavar="PATH", help="also write a JSON report ('-' for stdout)")
    p.set_defaults(func=cmd_homology)
    p = sub.add_parser("verify", help="run a verification suite over a corpus")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--corpus", help="directory of diagram JSON files (default: shipped corpus)")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("twist", help="compare twist-knot homology with the direct-sum model")
    p.add_argument("r", type=int)
    _add_params(p)
    p.add_argument("--check-main-b", action="store_true")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_twist, graded=None)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except FlagConflict as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (dg.MalformedInput, dg.OrientationInconsistent, dg.DanglingEdge, dg.NotPlanar,
            dg.WrongVertexKind, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
