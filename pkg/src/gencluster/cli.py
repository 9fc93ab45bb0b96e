"""Command-line front end: ``gencluster <command> ...``.

Exit status is 0 on success, 1 when a verification finds a failure and 2 on
usage errors (bad flags, unreadable or malformed input files).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from pathlib import Path

from . import seeds as gs
from . import sl2, sl3, typec, verify
from .laurent import LaurentError, LaurentPoly

DEFAULT_RANDOM_SEED = 0
DEFAULT_LAURENT_TRIALS = 1000
DEFAULT_MAX_LENGTH = 12
DEFAULT_TIME_LIMIT = 2.0


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# config and output helpers


def threads_from_env() -> int:
    raw = os.environ.get("GENCLUSTER_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"GENCLUSTER_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("GENCLUSTER_THREADS must be a positive integer")
    return n


def positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def nonnegative(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def load_json(path) -> object:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def write_text(path, text: str):
    Path(path).write_text(text)


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


class Out:
    def __init__(self, args):
        self.quiet = getattr(args, "quiet", False)

    def __call__(self, *parts):
        if not self.quiet:
            print(*parts)


def finish(args, obj: dict, dot: str | None = None):
    if getattr(args, "json", None):
        write_text(args.json, dump_json(obj))
    if dot is not None and getattr(args, "dot", None):
        write_text(args.dot, dot)


def config(args, **extra) -> dict:
    cfg = {"random_seed": getattr(args, "random_seed", DEFAULT_RANDOM_SEED), "threads": args.threads}
    cfg.update(extra)
    return cfg


# --------------------------------------------------------------------------
# seeds


BUILTIN_HELP = "built-in seed: C<n> (type C rank n), G2, or conj<l> (rank 2l-2 sl3 seed)"


def builtin_seed(name: str) -> gs.GenSeed:
    low = name.lower()
    try:
        if low == "g2":
            return sl3.g2_initial_seed()
        if low.startswith("conj"):
            return sl3.conjecture_seed(int(low[4:]))
        if low.startswith("c"):
            return typec.initial_seed(int(low[1:]))
    except ValueError:
        pass
    raise UsageError(f"unknown built-in seed {name!r}; {BUILTIN_HELP}")


def seed_from_args(args) -> gs.GenSeed:
    if args.seed and args.builtin:
        raise UsageError("give either --seed or --builtin, not both")
    if args.builtin:
        return builtin_seed(args.builtin)
    if not args.seed:
        raise UsageError("a seed is required (--seed FILE or --builtin NAME)")
    obj = load_json(args.seed)
    if not isinstance(obj, dict):
        raise UsageError(f"{args.seed}: a seed must be a JSON object")
    try:
        return gs.seed_from_json_obj(obj)
    except (gs.SeedError, TypeError, ValueError) as exc:
        raise UsageError(f"{args.seed}: {exc}") from None


def cmd_mutate(args) -> int:
    out = Out(args)
    seed = seed_from_args(args)
    try:
        final = gs.mutate_sequence(seed, args.sequence)
    except gs.SeedError as exc:
        raise UsageError(str(exc)) from None
    except LaurentError as exc:
        out(f"mutation failed: {exc}")
        return 1
    out(f"sequence: {','.join(map(str, args.sequence)) or '(empty)'}")
    for i, x in enumerate(final.x, 1):
        out(f"x{i}' = {x}")
    out("B' =", final.B.to_list())
    for i, pi in enumerate(final.p, 1):
        out(f"p{i}' =", [list(t) for t in pi])
    finish(
        args,
        {
            "config": config(args),
            "sequence": args.sequence,
            "seed": gs.seed_to_json_obj(seed),
            "variables": [x.to_json_obj() for x in final.x],
            "B": final.B.to_list(),
            "coeffs": [[list(t) for t in pi] for pi in final.p],
        },
    )
    return 0


def cmd_enumerate(args) -> int:
    out = Out(args)
    seed = seed_from_args(args)
    t0 = time.perf_counter()
    graph = gs.enumerate_graph(seed, args.max_nodes, args.max_depth)
    elapsed = time.perf_counter() - t0
    degs = sorted(set(graph.degrees().values()))
    out(f"clusters: {graph.num_nodes}")
    out(f"cluster variables: {len(graph.cluster_variables())}")
    out(f"edges: {len(graph.edges)}")
    out(f"vertex degrees: {degs}")
    out(f"complete: {graph.complete}")
    obj = graph.to_json_obj()
    obj["config"] = config(args, max_nodes=args.max_nodes, max_depth=args.max_depth)
    obj["seed"] = gs.seed_to_json_obj(seed)
    finish(args, obj, graph.to_dot())
    if args.timing:
        out(f"time: {elapsed:.3f}s")
    return 0


# --------------------------------------------------------------------------
# type C


def parse_cluster_monomial(text: str, n: int) -> typec.ClusterMonomial:
    e = 0
    orbits = {}
    for factor in filter(None, (f.strip() for f in text.split("*"))):
        base, _, power = factor.partition("^")
        try:
            k = int(power) if power else 1
        except ValueError:
            raise UsageError(f"bad exponent in {factor!r}") from None
        if base == typec.LAMBDA:
            e += k
            continue
        try:
            orb = typec.parse_orbit(base, n)
        except typec.TypeCError as exc:
            raise UsageError(str(exc)) from None
        if orb is not None:
            orbits[orb] = orbits.get(orb, 0) + k
    return typec.ClusterMonomial.make(e, orbits)


def cmd_typec(args) -> int:
    out = Out(args)
    try:
        C = typec.typec(args.n)
    except typec.TypeCError as exc:
        raise UsageError(str(exc)) from None
    result: dict = {"config": config(args), "n": args.n}
    did = False
    if args.enumerate:
        did = True
        clusters = sorted(sorted(str(o) for o in key) for key in C.clusters())
        flips = typec.flip_closure(args.n)
        out(f"cluster variables: {len(C.expansions)}")
        out(f"clusters: {len(clusters)}")
        out(f"centrally symmetric triangulations: {len(flips)}")
        for orb, x in sorted(C.expansions.items()):
            out(f"  {orb} = {x}")
        result["clusters"] = clusters
        result["variables"] = {str(o): x.to_json_obj() for o, x in sorted(C.expansions.items())}
        result["triangulations"] = len(flips)
    if args.express_small:
        did = True
        try:
            orb = typec.parse_orbit(args.express_small, args.n)
        except typec.TypeCError as exc:
            raise UsageError(str(exc)) from None
        q = C.express_in_small(orb)
        back = C.from_small(q)
        ok = back == C.x(orb)
        out(f"{args.express_small} = {q}")
        out(f"round trip: {'ok' if ok else 'FAILED'}")
        result["express_small"] = {"input": args.express_small, "value": q.to_json_obj(), "round_trip": ok}
        if not ok:
            finish(args, result)
            return 1
    if args.phi:
        did = True
        m = parse_cluster_monomial(args.phi, args.n)
        try:
            a = C.phi(m)
        except typec.TypeCError as exc:
            raise UsageError(str(exc)) from None
        out(f"Phi({m}) = {C.small_monomial(a)}")
        result["phi"] = {"input": str(m), "exponents": list(a)}
    if args.psi is not None:
        did = True
        try:
            m = C.psi(args.psi)
        except typec.TypeCError as exc:
            raise UsageError(str(exc)) from None
        out(f"Psi({C.small_monomial(args.psi)}) = {m}")
        result["psi"] = {"input": args.psi, "monomial": str(m)}
    if args.basis:
        did = True
        result["basis"] = basis_listing(C, args.basis, args.bound, out)
    if not did:
        raise UsageError("typec: choose at least one of --enumerate, --express-small, --phi, --psi, --basis")
    finish(args, result)
    return 0


def basis_listing(C, which: str, bound: int, out) -> list:
    rows = []
    if which == "S":
        import itertools

        for a in itertools.product(range(bound + 1), repeat=C.n + 1):
            if sum(a) <= bound:
                rows.append({"element": str(C.small_monomial(a)), "degree": sum(a)})
        rows.sort(key=lambda r: (r["degree"], r["element"]))
    elif which == "M":
        for m in C.basis_M(bound):
            rows.append({"element": str(m), "degree": C.degree(m)})
    else:
        for k, m, value in C.basis_B(bound):
            name = f"S{k}(lam)*{m}" if k else str(m)
            rows.append({"element": name, "degree": C.degree(typec.ClusterMonomial(k, m.orbits)), "value": value.to_json_obj()})
    out(f"basis {which} up to degree {bound}: {len(rows)} elements")
    for r in rows:
        out(f"  [{r['degree']}] {r['element']}")
    return rows


# --------------------------------------------------------------------------
# sl2


def cmd_sl2(args) -> int:
    out = Out(args)
    if args.l < 2:
        raise UsageError("l must be at least 2")
    if args.sl2_cmd == "char":
        chosen = [x is not None and x is not False for x in (args.string, args.frobenius)] + [args.z]
        if sum(chosen) != 1:
            raise UsageError("char: choose exactly one of --string, --z, --frobenius")
        try:
            if args.string is not None:
                if len(args.string) != 2:
                    raise UsageError("--string takes d,k")
                d, k = args.string
                name = f"W({d},{k})"
                ch = sl2.kr_character(d, k, args.l)
            elif args.z:
                name = "z"
                ch = sl2.z_character(args.l)
            else:
                name = f"z^({args.frobenius})"
                ch = sl2.frobenius_character(args.frobenius, args.l)
        except sl2.CharacterError as exc:
            raise UsageError(str(exc)) from None
        out(f"chi({name}) = {ch}")
        finish(args, {"config": config(args), "l": args.l, "module": name, "character": ch.to_json_obj()})
        return 0
    labels, l = labels_or_usage(lambda: sl2.labels_from_file(args.labels))
    if l != args.l:
        raise UsageError(f"labels file is for l={l}, command line says l={args.l}")
    dec = sl2.decompose(labels, l)
    out(" x ".join(str(lab) for lab in labels) + " =")
    for lab, mult in sorted(dec.items(), key=lambda t: str(t[0])):
        out(f"  {mult} * [{lab}]")
    finish(
        args,
        {
            "config": config(args),
            "l": l,
            "factors": [lab.to_json_obj(l) for lab in labels],
            "decomposition": [{"label": lab.to_json_obj(l), "mult": m} for lab, m in sorted(dec.items(), key=lambda t: str(t[0]))],
        },
    )
    return 0


def labels_or_usage(fn):
    try:
        return fn()
    except OSError as exc:
        raise UsageError(f"cannot read labels: {exc.strerror}") from None
    except (sl2.CharacterError, AttributeError, TypeError, ValueError) as exc:
        raise UsageError(f"bad labels: {exc}") from None


# --------------------------------------------------------------------------
# sl3


def sl3_labels_from_file(path) -> list:
    data = load_json(path)
    items = data if isinstance(data, list) else data.get("labels", [data]) if isinstance(data, dict) else None
    if items is None:
        raise UsageError(f"{path}: expected a list of labels")
    try:
        return [sl3.label_from_json_obj(obj) for obj in items]
    except (sl2.CharacterError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: bad label: {exc}") from None


def cmd_sl3(args) -> int:
    out = Out(args)
    modes = [args.chars, bool(args.decompose), bool(args.g2), args.conjecture]
    if sum(modes) != 1:
        raise UsageError("sl3: choose exactly one of --chars, --decompose, --g2, --conjecture")
    if args.chars:
        table = sl3.fundamental_characters_l2()
        for key, ch in table.items():
            out(f"chi(L({key})) = {ch}")
        finish(args, {"config": config(args), "characters": {k: v.to_json_obj() for k, v in table.items()}})
        return 0
    if args.decompose:
        labels = sl3_labels_from_file(args.decompose)
        dec = sl3.decompose_l2(labels)
        out(" x ".join(str(lab) for lab in labels) + " =")
        for lab, mult in sorted(dec.items()):
            out(f"  {mult} * [{lab}]")
        finish(
            args,
            {
                "config": config(args),
                "factors": [str(lab) for lab in labels],
                "decomposition": [{"label": str(lab), "mult": m} for lab, m in sorted(dec.items())],
            },
        )
        return 0
    if args.g2:
        if args.g2 != "enumerate":
            raise UsageError("--g2 supports: enumerate")
        graph = gs.enumerate_graph(sl3.g2_initial_seed())
        out(f"clusters: {graph.num_nodes}")
        out(f"cluster variables: {len(graph.cluster_variables())}")
        out(f"vertex degrees: {sorted(set(graph.degrees().values()))}")
        obj = graph.to_json_obj()
        obj["config"] = config(args)
        finish(args, obj, graph.to_dot())
        return 0
    # --conjecture
    matrix = None
    if args.matrix:
        matrix = load_json(args.matrix)
        if isinstance(matrix, dict):
            matrix = matrix.get("B")
        if not isinstance(matrix, list):
            raise UsageError(f"{args.matrix}: expected a matrix (list of rows) or {{\"B\": ...}}")
    try:
        seed = sl3.conjecture_seed(args.l, matrix)
    except (gs.SeedError, TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    out(f"rank {seed.n} seed, B = {seed.B.to_list()}, d = {list(seed.B.d)}")
    rng = random.Random(args.random_seed)
    limit = args.time_limit or None
    failures = []
    unfinished = []
    biggest = 0
    t0 = time.perf_counter()
    for _ in range(args.laurent_trials):
        seq = gs.random_sequence(seed.n, rng.randint(0, args.max_length), rng)
        rep = gs.check_laurent(seed, seq, limit)
        biggest = max([biggest] + rep.support_sizes)
        if not rep.ok:
            failures.append({"sequence": list(seq), "step": rep.failed_step, "message": rep.message})
        elif rep.truncated:
            unfinished.append({"sequence": list(seq), "step": rep.failed_step})
    elapsed = time.perf_counter() - t0
    out(
        f"Laurent trials: {args.laurent_trials}, failures: {len(failures)}, "
        f"unfinished within {limit}s: {len(unfinished)}, largest support: {biggest}"
    )
    if args.timing:
        out(f"time: {elapsed:.3f}s")
    finish(
        args,
        {
            "config": config(
                args, laurent_trials=args.laurent_trials, max_length=args.max_length, time_limit=limit
            ),
            "seed": gs.seed_to_json_obj(seed),
            "failures": failures,
            "unfinished": unfinished,
            "largest_support": biggest,
        },
    )
    return 1 if failures else 0


# --------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    out = Out(args)
    t0 = time.perf_counter()
    if args.target == "phi":
        if args.l is None:
            raise UsageError("verify phi needs --l")
        if args.l < 2:
            raise UsageError("l must be at least 2")
        rep = verify.verify_phi(args.l, args.bound, args.random_seed)
    else:
        rep = verify.verify_eta(args.bound, args.random_seed)
    elapsed = time.perf_counter() - t0
    out(rep.title)
    for group, (passed, total) in rep.summary().items():
        out(f"  {group}: {passed}/{total}")
    for c in rep.failures()[:20]:
        out(f"  FAILED {c.name} {c.detail}")
    out("all checks passed" if rep.ok else f"{len(rep.failures())} checks failed")
    if args.timing:
        out(f"time: {elapsed:.3f}s")
    obj = rep.to_json_obj()
    obj["config"] = config(args, degree_bound=args.bound)
    finish(args, obj)
    return 0 if rep.ok else 1


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="FILE", help="write a JSON artifact")
    common.add_argument("--quiet", action="store_true", help="suppress the text summary")
    common.add_argument("--random-seed", type=int, default=DEFAULT_RANDOM_SEED, help="seed for randomized trials")
    common.add_argument("--timing", action="store_true", help="print wall-clock time")

    parser = argparse.ArgumentParser(prog="gencluster", description="Generalized cluster algebras and epsilon-characters.")
    sub = parser.add_subparsers(dest="command", required=True)

    def seed_opts(p):
        p.add_argument("--seed", metavar="FILE", help="seed JSON file")
        p.add_argument("--builtin", metavar="NAME", help=BUILTIN_HELP)

    p = sub.add_parser("mutate", parents=[common], help="apply a mutation sequence")
    seed_opts(p)
    p.add_argument("--sequence", type=int_list, default=[], help="comma-separated 1-based directions")
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("enumerate", parents=[common], help="exchange graph by breadth-first mutation")
    seed_opts(p)
    p.add_argument("--dot", metavar="FILE", help="write the graph in DOT format")
    p.add_argument("--max-nodes", type=positive, default=gs.DEFAULT_MAX_NODES)
    p.add_argument("--max-depth", type=positive, default=gs.DEFAULT_MAX_DEPTH)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("typec", parents=[common], help="the type C_n algebra and its bases")
    p.add_argument("--n", type=positive, required=True)
    p.add_argument("--enumerate", action="store_true", help="list cluster variables and clusters")
    p.add_argument("--express-small", metavar="ORBIT", help="write x:a,b in the small variables")
    p.add_argument("--phi", metavar="MONOMIAL", help="e.g. 'lam*x:0,6^2'")
    p.add_argument("--psi", type=int_list, metavar="A0,...,An", help="exponents of s0..sn")
    p.add_argument("--basis", choices=["S", "M", "B"])
    p.add_argument("--bound", type=nonnegative, default=verify.DEFAULT_DEGREE_BOUND)
    p.set_defaults(func=cmd_typec)

    p = sub.add_parser("sl2", help="sl2 epsilon-characters")
    p.add_argument("--l", type=int, required=True, help="order of eps^2")
    sl2sub = p.add_subparsers(dest="sl2_cmd", required=True)
    c = sl2sub.add_parser("char", parents=[common], help="a single character")
    c.add_argument("--string", type=int_list, metavar="D,K")
    c.add_argument("--z", action="store_true")
    c.add_argument("--frobenius", type=nonnegative, metavar="A")
    d = sl2sub.add_parser("decompose", parents=[common], help="decompose a tensor product")
    d.add_argument("--labels", required=True, metavar="FILE")
    p.set_defaults(func=cmd_sl2)

    p = sub.add_parser("sl3", parents=[common], help="sl3 at l=2 and the rank 2l-2 seeds")
    p.add_argument("--chars", action="store_true", help="print the fundamental-type characters")
    p.add_argument("--decompose", metavar="FILE", help="labels JSON")
    p.add_argument("--g2", metavar="ACTION", help="enumerate")
    p.add_argument("--dot", metavar="FILE", help="DOT output for --g2 enumerate")
    p.add_argument("--conjecture", action="store_true", help="Laurent trials on the rank 2l-2 seed")
    p.add_argument("--l", type=int, default=3)
    p.add_argument("--matrix", metavar="FILE", help="override the exchange matrix")
    p.add_argument("--laurent-trials", type=nonnegative, default=DEFAULT_LAURENT_TRIALS)
    p.add_argument("--max-length", type=nonnegative, default=DEFAULT_MAX_LENGTH)
    p.add_argument(
        "--time-limit",
        type=float,
        default=DEFAULT_TIME_LIMIT,
        help="seconds per sequence before it is reported unfinished (0: no limit)",
    )
    p.set_defaults(func=cmd_sl3)

    p = sub.add_parser("verify", parents=[common], help="check the ring isomorphisms")
    p.add_argument("target", choices=["phi", "eta"])
    p.add_argument("--l", type=int)
    p.add_argument("--bound", type=nonnegative, default=verify.DEFAULT_DEGREE_BOUND)
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.threads = threads_from_env()
        return args.func(args)
    except UsageError as exc:
        print(f"gencluster: error: {exc}", file=sys.stderr)
        return 2


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
