"""Command-line front end: solve cvp/lmp/svp instances stored as JSON."""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional

from .cvp import NormSpec, cvp_search
from .errors import BudgetExceeded, ContractViolation, DimensionTooLarge, RankDeficient
from .exact import format_rat, parse_rat, rank
from .geometry import LpBody, Polytope
from .lattice import gram, shortest_form_vector
from .membership import Config, Stats, lmp_solve_result
from .oracle import oracle_cvp, oracle_lmp, oracle_svp

SCHEMA = 1


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parsing


def _rat(x) -> Fraction:
    if isinstance(x, bool):
        raise InputError("booleans are not numbers")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return parse_rat(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad rational {x!r}") from exc
    raise InputError(f"expected an integer or 'p/q' string, got {x!r}")


def _vec(xs) -> List[Fraction]:
    if not isinstance(xs, list):
        raise InputError("expected a list")
    return [_rat(x) for x in xs]


def _mat(rows) -> List[List[Fraction]]:
    if not isinstance(rows, list) or not rows:
        raise InputError("expected a nonempty list of lists")
    out = [_vec(r) for r in rows]
    if len({len(r) for r in out}) != 1:
        raise InputError("ragged matrix")
    return out


def _int(x) -> int:
    v = _rat(x)
    if v.denominator != 1:
        raise InputError(f"expected an integer, got {x!r}")
    return int(v)


def parse_lattice(doc: Dict[str, Any], n: Optional[int] = None) -> List[List[Fraction]]:
    """Basis vectors are listed one per entry; returns the n x m column matrix."""
    if "lattice" not in doc:
        if n is None:
            raise InputError("missing 'lattice'")
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    vecs = _mat(doc["lattice"])
    return [[v[i] for v in vecs] for i in range(len(vecs[0]))]


def parse_norm(spec) -> NormSpec:
    if not isinstance(spec, dict) or len(spec) != 1:
        raise InputError("norm must be an object with one key")
    (key, val), = spec.items()
    if key == "lp":
        return NormSpec.lp(_int(val))
    if key == "infinity":
        return NormSpec.infinity()
    if key == "polyhedral":
        H = [[_int(a) for a in row] for row in val["A"]]
        beta = [_int(b) for b in val["beta"]]
        return NormSpec.polyhedral(H, beta)
    raise InputError(f"unknown norm {key!r}")


def parse_body(spec):
    if not isinstance(spec, dict) or len(spec) != 1:
        raise InputError("body must be an object with one key")
    (key, val), = spec.items()
    if key == "polytope":
        A = _mat(val["A"])
        beta = _vec(val["beta"])
        if len(beta) != len(A):
            raise InputError("polytope rows and bounds differ in number")
        return Polytope(A, beta)
    if key == "lp":
        V_inv = _mat(val["V_inv"])
        t = _vec(val["t"])
        alpha = _rat(val["alpha"])
        if alpha <= 0:
            raise InputError("alpha must be positive")
        if len(V_inv) != len(V_inv[0]) or len(t) != len(V_inv):
            raise InputError("lp-body dimensions are inconsistent")
        if rank(V_inv) < len(V_inv):
            raise ContractViolation("V_inv is singular")
        return LpBody(_int(val["p"]), V_inv, t, alpha.numerator, alpha.denominator, len(V_inv))
    raise InputError(f"unknown body {key!r}")


# ---------------------------------------------------------------------------
# solving


def _vec_out(v) -> List[str]:
    return [format_rat(Fraction(a)) for a in v]


def solve_doc(doc: Dict[str, Any], config: Config, use_oracle: bool) -> Dict[str, Any]:
    kind = doc.get("kind")
    stats = Stats()
    if kind == "cvp":
        B = parse_lattice(doc)
        t = _vec(doc["target"])
        if len(t) != len(B):
            raise InputError("target dimension differs from the lattice")
        if len(B) > config.max_dimension:
            raise DimensionTooLarge(f"dimension {len(B)} exceeds the limit {config.max_dimension}")
        norm = parse_norm(doc["norm"])
        if use_oracle:
            res = oracle_cvp(B, t, norm)
        else:
            res = cvp_search(B, t, norm, config)
            stats = res.stats
        answer = {
            "closest": _vec_out(res.closest),
            "coefficients": [int(a) for a in res.coeffs],
            "distance_pow": format_rat(res.distance_pow),
        }
    elif kind == "lmp":
        body = parse_body(doc["body"])
        B = parse_lattice(doc, body.dim)
        if len(B) != body.dim:
            raise InputError("lattice dimension differs from the body")
        if use_oracle:
            answer = oracle_lmp(body, B)
        else:
            res = lmp_solve_result(body, B, config)
            stats = res.stats
            answer = res.member
    elif kind == "svp":
        B = parse_lattice(doc)
        if len(B) > config.max_dimension:
            raise DimensionTooLarge(f"dimension {len(B)} exceeds the limit {config.max_dimension}")
        if rank(B) < len(B[0]):
            raise RankDeficient("lattice basis must have full column rank")
        if use_oracle:
            val, y = oracle_svp(B)
        else:
            y, val = shortest_form_vector(gram(B))
        vec = [sum((row[j] * y[j] for j in range(len(y))), Fraction(0)) for row in B]
        answer = {"shortest_sq": format_rat(val), "vector": _vec_out(vec)}
    else:
        raise InputError("'kind' must be one of cvp, lmp, svp")
    return {"schema": SCHEMA, "kind": kind, "answer": answer, "stats": stats.as_dict()}


def _agree(kind: str, a, b) -> bool:
    if kind == "cvp":
        return a["distance_pow"] == b["distance_pow"]
    if kind == "svp":
        return a["shortest_sq"] == b["shortest_sq"]
    return a == b


# ---------------------------------------------------------------------------
# random corpus for `check --random`


def random_doc(kind: str, rng: random.Random) -> Dict[str, Any]:
    n = rng.randint(1, 3)
    if kind in ("cvp", "svp"):
        m = rng.randint(1, n) if kind == "cvp" else n
        while True:
            vecs = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(m)]
            if rank(vecs) == m:
                break
        doc: Dict[str, Any] = {"kind": kind, "lattice": vecs}
        if kind == "cvp":
            doc["target"] = [rng.randint(-5, 5) for _ in range(n)]
            doc["norm"] = rng.choice([{"lp": 1}, {"lp": 2}, {"lp": 3}, {"infinity": True}])
        return doc
    if rng.random() < 0.5:
        A, beta = [], []
        for i in range(n):
            for s in (1, -1):
                A.append([s * int(i == j) for j in range(n)])
                beta.append(rng.randint(0, 5))
        A.append([rng.randint(-8, 8) for _ in range(n)])
        beta.append(rng.randint(-8, 8))
        return {"kind": "lmp", "body": {"polytope": {"A": A, "beta": beta}}}
    while True:
        V = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        if rank(V) == n:
            break
    t = [f"{rng.randint(-8, 8)}/{rng.randint(1, 4)}" for _ in range(n)]
    alpha = f"{rng.randint(1, 8)}/{rng.randint(1, 8)}"
    return {"kind": "lmp", "body": {"lp": {"p": rng.choice([2, 3, 4]), "V_inv": V, "t": t, "alpha": alpha}}}


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="latmem", description="Exact lattice membership and closest vector solver.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("cvp", "lmp", "svp", "check"):
        sp = sub.add_parser(name)
        sp.add_argument("--input", help="instance JSON file ('-' for stdin)")
        sp.add_argument("--no-replacement", action="store_true", help="skip hyperplane size reduction")
        sp.add_argument("--oracle", action="store_true", help="solve by brute-force enumeration")
        sp.add_argument("--max-dim", type=int, default=None, help="largest accepted dimension")
        sp.add_argument("--json", action="store_true", help="print the JSON result document")
        if name == "check":
            sp.add_argument("--random", type=int, default=0, help="check this many random instances")
            sp.add_argument("--kind", choices=("cvp", "lmp", "svp"), default="lmp")
            sp.add_argument("--seed", type=int, default=0)
    return ap


def _load(path: Optional[str]) -> Dict[str, Any]:
    if path is None:
        raise InputError("--input is required")
    try:
        if path == "-":
            doc = json.load(sys.stdin)
        else:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("instance must be a JSON object")
    return doc


def _summary(out: Dict[str, Any]) -> str:
    ans = out["answer"]
    if out["kind"] == "cvp":
        return f"closest {ans['closest']} distance^k {ans['distance_pow']}"
    if out["kind"] == "svp":
        return f"shortest {ans['vector']} squared length {ans['shortest_sq']}"
    return "yes" if ans else "no"


def _check(docs, config: Config, as_json: bool) -> int:
    reports = []
    ok = True
    for doc in docs:
        main = solve_doc(doc, config, use_oracle=False)
        ref = solve_doc(doc, config, use_oracle=True)
        agree = _agree(doc["kind"], main["answer"], ref["answer"])
        ok &= agree
        reports.append({"schema": SCHEMA, "kind": doc["kind"], "agree": agree, "main": main["answer"], "oracle": ref["answer"], "stats": main["stats"]})
    if as_json:
        print(json.dumps(reports[0] if len(reports) == 1 else reports))
    else:
        bad = sum(not r["agree"] for r in reports)
        print(f"{len(reports) - bad}/{len(reports)} agree")
    return 0 if ok else 1


def run(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config = Config(no_replacement=args.no_replacement)
    if args.max_dim is not None:
        config.max_dimension = args.max_dim
    try:
        if args.command == "check":
            if args.random:
                rng = random.Random(args.seed)
                docs = [random_doc(args.kind, rng) for _ in range(args.random)]
            else:
                docs = [_load(args.input)]
            return _check(docs, config, args.json)
        doc = _load(args.input)
        doc.setdefault("kind", args.command)
        if doc["kind"] != args.command:
            raise InputError(f"instance kind {doc['kind']!r} does not match the command")
        out = solve_doc(doc, config, args.oracle)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ContractViolation, ValueError, KeyError, TypeError) as exc:
        msg = f"missing field {exc}" if isinstance(exc, KeyError) else str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return 2
    print(json.dumps(out) if args.json else _summary(out))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
