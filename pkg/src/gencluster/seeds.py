"""Generalized seeds, three-part mutation and exchange-graph enumeration.

Directions are 1-based throughout the public API, matching the usual
``mu_1, ..., mu_n`` notation.  A seed stores its cluster variables as Laurent
polynomials in the initial variables; coefficient generators of the tropical
semifield live in the same variable table as extra symbols.
"""

from __future__ import annotations

import hashlib
import json
import random
import signal
import threading
from collections import deque
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .laurent import LaurentError, LaurentPoly, VarTable, divide_exact, mono_from_exps

DEFAULT_MAX_NODES = 100_000
DEFAULT_MAX_DEPTH = 64


class SeedError(ValueError):
    pass


# --------------------------------------------------------------------------
# exchange matrices


@dataclass(frozen=True)
class ExchangeMatrix:
    b: tuple[tuple[int, ...], ...]
    d: tuple[int, ...]

    def __post_init__(self):
        b = tuple(tuple(int(v) for v in row) for row in self.b)
        d = tuple(int(v) for v in self.d)
        n = len(b)
        if any(len(row) != n for row in b):
            raise SeedError("exchange matrix must be square")
        if len(d) != n:
            raise SeedError("divisor vector length must equal the rank")
        if any(v <= 0 for v in d):
            raise SeedError("divisors must be positive")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    @property
    def n(self) -> int:
        return len(self.b)

    def beta(self, j: int, k: int) -> int:
        """``b[j][k] / d[k]`` (0-based indices)."""
        return self.b[j][k] // self.d[k]

    def to_list(self) -> list[list[int]]:
        return [list(row) for row in self.b]


@dataclass
class ValidationReport:
    skew_symmetrizable: bool
    divisible: bool
    symmetrizer: tuple[int, ...] | None
    messages: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.skew_symmetrizable and self.divisible


def validate(B: ExchangeMatrix) -> ValidationReport:
    """Find a positive integer symmetrizer and check column divisibility."""
    n = B.n
    b = B.b
    messages = []
    skew = True
    for i in range(n):
        if b[i][i] != 0:
            skew = False
            messages.append(f"nonzero diagonal entry at ({i + 1},{i + 1})")
    # d~_i b_ij = -d~_j b_ji, solved by propagation along nonzero entries
    weights: list[Fraction | None] = [None] * n
    for root in range(n):
        if weights[root] is not None:
            continue
        weights[root] = Fraction(1)
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i == j:
                    continue
                bij, bji = b[i][j], b[j][i]
                if bij == 0 and bji == 0:
                    continue
                if bij == 0 or bji == 0 or (bij > 0) == (bji > 0):
                    skew = False
                    messages.append(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) are not sign-skew")
                    continue
                w = weights[i] * Fraction(bij, -bji)
                if weights[j] is None:
                    weights[j] = w
                    stack.append(j)
                elif weights[j] != w:
                    skew = False
                    messages.append(f"inconsistent symmetrizer around ({i + 1},{j + 1})")
    symmetrizer = None
    if skew:
        den = lcm(*(w.denominator for w in weights)) if n else 1
        ints = [int(w * den) for w in weights]
        g = gcd(*ints) if ints else 1
        symmetrizer = tuple(v // g for v in ints)
    divisible = True
    for k in range(n):
        for j in range(n):
            if b[j][k] % B.d[k]:
                divisible = False
                messages.append(f"d[{k + 1}]={B.d[k]} does not divide b[{j + 1}][{k + 1}]={b[j][k]}")
    return ValidationReport(skew, divisible, symmetrizer, messages)


def _check_direction(n: int, k: int) -> int:
    if not 1 <= k <= n:
        raise SeedError(f"direction {k} out of range 1..{n}")
    return k - 1


def mutate_matrix(B: ExchangeMatrix, k: int) -> ExchangeMatrix:
    kk = _check_direction(B.n, k)
    b = B.b
    n = B.n
    new = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == kk or j == kk:
                row.append(-b[i][j])
            else:
                bik, bkj = b[i][kk], b[kk][j]
                row.append(b[i][j] + (abs(bik) * bkj + bik * abs(bkj)) // 2)
        new.append(tuple(row))
    return ExchangeMatrix(tuple(new), B.d)


# --------------------------------------------------------------------------
# tropical coefficients


def trop_normalize(p: Sequence[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    """Shift a coefficient tuple so that its tropical sum is 1."""
    if not p:
        return ()
    m = len(p[0])
    mins = [min(t[c] for t in p) for c in range(m)]
    return tuple(tuple(t[c] - mins[c] for c in range(m)) for t in p)


def mutate_coeffs(p, B: ExchangeMatrix, k: int):
    """Coefficient mutation; ratios per direction, normalized tropically."""
    kk = _check_direction(B.n, k)
    pk = p[kk]
    new = []
    for i, pi in enumerate(p):
        if i == kk:
            new.append(tuple(reversed(pi)))
            continue
        bki = B.b[kk][i]
        beta = bki // B.d[i]
        factor = pk[-1] if bki >= 0 else pk[0]
        m = len(pi[0])
        cur = [0] * m
        out = [tuple(cur)]
        for r in range(1, len(pi)):
            cur = [cur[c] + beta * factor[c] + pi[r][c] - pi[r - 1][c] for c in range(m)]
            out.append(tuple(cur))
        new.append(trop_normalize(out))
    return tuple(new)


# --------------------------------------------------------------------------
# seeds


@dataclass(frozen=True)
class GenSeed:
    """Cluster, exchange matrix and coefficient tuple.

    ``x`` holds the cluster variables over ``table``; ``lambda_vars`` names the
    generators of the tropical coefficient semifield, which are also symbols of
    ``table``.
    """

    x: tuple[LaurentPoly, ...]
    B: ExchangeMatrix
    p: tuple[tuple[tuple[int, ...], ...], ...]
    lambda_vars: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return self.B.n

    @property
    def table(self) -> VarTable:
        return self.x[0].table

    @classmethod
    def initial(cls, B, d, coeffs, var_names=None, lambda_vars=()) -> "GenSeed":
        """Initial seed with ``x_i = t_i``.

        ``coeffs[i]`` lists ``d[i] + 1`` tropical monomials, each an exponent
        list over ``lambda_vars`` or a ``{name: exponent}`` mapping.
        """
        M = B if isinstance(B, ExchangeMatrix) else ExchangeMatrix(tuple(map(tuple, B)), tuple(d))
        n = M.n
        lambda_vars = tuple(lambda_vars)
        var_names = tuple(var_names or (f"x{i + 1}" for i in range(n)))
        if len(var_names) != n:
            raise SeedError("need one variable name per direction")
        table = VarTable(var_names + lambda_vars)
        if len(coeffs) != n:
            raise SeedError("need one coefficient tuple per direction")
        p = []
        for i, pi in enumerate(coeffs):
            if len(pi) != M.d[i] + 1:
                raise SeedError(f"coefficient tuple {i + 1} must have length d+1={M.d[i] + 1}")
            row = []
            for t in pi:
                if isinstance(t, dict):
                    t = [t.get(name, 0) for name in lambda_vars]
                t = tuple(int(v) for v in t)
                if len(t) != len(lambda_vars):
                    raise SeedError("tropical monomial length must match lambda_vars")
                row.append(t)
            p.append(tuple(row))
        report = validate(M)
        if not report.ok:
            raise SeedError("invalid exchange matrix: " + "; ".join(report.messages))
        x = tuple(LaurentPoly.var(table, name) for name in var_names)
        return cls(x, M, tuple(p), lambda_vars)

    def coefficient(self, t: tuple[int, ...]) -> LaurentPoly:
        """Tropical monomial as an element of the coefficient group ring."""
        return self.table.monomial(dict(zip(self.lambda_vars, t)))

    def exchange_polynomial(self, k: int, u: LaurentPoly, v: LaurentPoly) -> LaurentPoly:
        """``theta_k(u, v) = sum_r p_{k,r} u^r v^{d_k - r}``."""
        kk = _check_direction(self.n, k)
        pk = self.p[kk]
        dk = len(pk) - 1
        upow = [self.table.one()]
        vpow = [self.table.one()]
        for _ in range(dk):
            upow.append(upow[-1] * u)
            vpow.append(vpow[-1] * v)
        total = self.table.zero()
        for r, t in enumerate(pk):
            total = total + self.coefficient(t) * upow[r] * vpow[dk - r]
        return total

    def exchange_monomials(self, k: int) -> tuple[LaurentPoly, LaurentPoly]:
        kk = _check_direction(self.n, k)
        up = self.table.one()
        um = self.table.one()
        for j in range(self.n):
            beta = self.B.beta(j, kk)
            if beta > 0:
                up = up * self.x[j] ** beta
            elif beta < 0:
                um = um * self.x[j] ** (-beta)
        return up, um

    def key(self) -> frozenset:
        return cluster_key(self)


def relation_class(pk: Sequence[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    """Coefficient tuple up to reversal.

    Mutating in direction k reverses p_k and negates column k, which swaps
    u_k^+ and u_k^-; the exchange relation itself is therefore determined by
    p_k only up to reversal.
    """
    pk = tuple(pk)
    return min(pk, tuple(reversed(pk)))


def mutate(seed: GenSeed, k: int) -> GenSeed:
    kk = _check_direction(seed.n, k)
    up, um = seed.exchange_monomials(k)
    num = seed.exchange_polynomial(k, up, um)
    xk = divide_exact(num, seed.x[kk])
    x = seed.x[:kk] + (xk,) + seed.x[kk + 1:]
    return GenSeed(x, mutate_matrix(seed.B, k), mutate_coeffs(seed.p, seed.B, k), seed.lambda_vars)


def mutate_sequence(seed: GenSeed, sequence: Sequence[int]) -> GenSeed:
    for k in sequence:
        seed = mutate(seed, k)
    return seed


def cluster_key(seed: GenSeed) -> frozenset:
    """Unordered set of cluster variables; identifies a vertex of the graph."""
    return frozenset(seed.x)


def poly_sort_key(p: LaurentPoly) -> str:
    return json.dumps(p.to_json_obj()["terms"], sort_keys=True)


def fingerprint(key: frozenset) -> str:
    blob = json.dumps(sorted(poly_sort_key(p) for p in key))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


# --------------------------------------------------------------------------
# exchange graphs


@dataclass
class ExchangeGraph:
    nodes: dict  # key -> GenSeed, canonically ordered
    edges: list  # (key, k, key) with k 1-based
    complete: bool
    depth: dict = field(default_factory=dict)

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    def cluster_variables(self) -> set[LaurentPoly]:
        out = set()
        for key in self.nodes:
            out |= key
        return out

    def degrees(self) -> dict:
        deg = {key: 0 for key in self.nodes}
        for a, _, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def ids(self) -> dict:
        return {key: i for i, key in enumerate(self.nodes)}

    def to_json_obj(self) -> dict:
        ids = self.ids()
        nodes = []
        for key, seed in self.nodes.items():
            nodes.append(
                {
                    "id": ids[key],
                    "fingerprint": fingerprint(key),
                    "depth": self.depth.get(key, 0),
                    "variables": [str(v) for v in seed.x],
                    "B": seed.B.to_list(),
                }
            )
        edges = [{"source": ids[a], "target": ids[b], "direction": k} for a, k, b in self.edges]
        return {
            "complete": self.complete,
            "num_nodes": len(self.nodes),
            "num_edges": len(self.edges),
            "num_variables": len(self.cluster_variables()),
            "nodes": nodes,
            "edges": edges,
        }

    def to_dot(self) -> str:
        ids = self.ids()
        lines = ["graph exchange {"]
        for key in self.nodes:
            label = "\\n".join(sorted(str(v) for v in key))
            lines.append(f'  n{ids[key]} [label="{label}"];')
        for a, k, b in self.edges:
            lines.append(f'  n{ids[a]} -- n{ids[b]} [label="{k}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def enumerate_graph(seed: GenSeed, max_nodes: int = DEFAULT_MAX_NODES, max_depth: int = DEFAULT_MAX_DEPTH) -> ExchangeGraph:
    """Breadth-first mutation closure, deduplicated by unordered cluster."""
    start = cluster_key(seed)
    seeds = {start: seed}
    depth = {start: 0}
    edges: dict = {}
    queue = deque([start])
    complete = True
    while queue:
        key = queue.popleft()
        s = seeds[key]
        if depth[key] >= max_depth:
            complete = False
            continue
        for k in range(1, s.n + 1):
            t = mutate(s, k)
            tk = cluster_key(t)
            if tk not in seeds:
                if len(seeds) >= max_nodes:
                    complete = False
                    continue
                seeds[tk] = t
                depth[tk] = depth[key] + 1
                queue.append(tk)
            # first discovery fixes the direction label of an edge
            edges.setdefault(frozenset((key, tk)), (key, k, tk))
    order = sorted(seeds, key=lambda key: (depth[key], fingerprint(key)))
    ids = {key: i for i, key in enumerate(order)}
    edge_list = sorted(
        ((a, k, b) if ids[a] <= ids[b] else (b, k, a) for a, k, b in edges.values()),
        key=lambda e: (ids[e[0]], e[1], ids[e[2]]),
    )
    return ExchangeGraph({key: seeds[key] for key in order}, edge_list, complete, depth)


@dataclass
class LaurentReport:
    ok: bool
    sequence: tuple[int, ...]
    support_sizes: list[int]
    failed_step: int | None = None
    message: str = ""
    truncated: bool = False

    @property
    def complete(self) -> bool:
        """Every step of the sequence was carried out and was exact."""
        return self.ok and not self.truncated


class _Deadline(Exception):
    pass


@contextmanager
def _time_limit(seconds: float | None):
    """Raise ``_Deadline`` after ``seconds`` of wall time (main thread, POSIX)."""
    usable = (
        seconds is not None
        and hasattr(signal, "setitimer")
        and threading.current_thread() is threading.main_thread()
    )
    if not usable:
        yield
        return

    def handler(signum, frame):
        raise _Deadline

    old = signal.signal(signal.SIGALRM, handler)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def check_laurent(seed: GenSeed, sequence: Sequence[int], time_limit: float | None = None) -> LaurentReport:
    """Apply ``sequence`` and record whether every division was exact.

    With ``time_limit`` set (seconds), a sequence that has not finished in time
    is abandoned and the report is marked ``truncated``: the steps carried out
    were exact, the rest were not checked.
    """
    sizes: list[int] = []
    step = 0
    try:
        with _time_limit(time_limit):
            for step, k in enumerate(sequence):
                try:
                    seed = mutate(seed, k)
                except LaurentError as exc:
                    return LaurentReport(False, tuple(sequence), sizes, step, str(exc))
                sizes.append(len(seed.x[k - 1]))
    except _Deadline:
        return LaurentReport(True, tuple(sequence), sizes, step, f"stopped after {time_limit}s", True)
    return LaurentReport(True, tuple(sequence), sizes)


def random_sequence(n: int, length: int, rng: random.Random) -> list[int]:
    """Random directions with no immediate repeats (those cancel)."""
    seq: list[int] = []
    for _ in range(length):
        choices = [k for k in range(1, n + 1) if not seq or k != seq[-1]] or [1]
        seq.append(rng.choice(choices))
    return seq


# --------------------------------------------------------------------------
# JSON


def seed_from_json_obj(obj: dict) -> GenSeed:
    try:
        n = int(obj["rank"])
        B = obj["B"]
        d = obj["d"]
        coeffs = obj["coeffs"]
        lam = obj.get("lambda_vars", [])
    except KeyError as exc:
        raise SeedError(f"seed JSON missing field {exc.args[0]!r}") from None
    if len(B) != n:
        raise SeedError("rank does not match B")
    return GenSeed.initial(B, d, coeffs, obj.get("vars"), lam)


def seed_to_json_obj(seed: GenSeed) -> dict:
    return {
        "rank": seed.n,
        "B": seed.B.to_list(),
        "d": list(seed.B.d),
        "coeffs": [[list(t) for t in pi] for pi in seed.p],
        "lambda_vars": list(seed.lambda_vars),
        "vars": [n for n in seed.table.names if n not in seed.lambda_vars],
    }
