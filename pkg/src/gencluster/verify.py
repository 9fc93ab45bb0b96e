"""Check the cluster-algebra / character-ring correspondences computationally.

Both checks compare exact Laurent polynomials.  They are exhaustive on
relation instances and bounded in degree on bases; they are evidence, not a
proof.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .laurent import LaurentPoly, VarTable, substitute
from .seeds import enumerate_graph, mutate
from .sl2 import (
    KRString,
    SimpleLabelA1,
    decompose,
    factor_dominant,
    leading_dominant,
    kr_character,
    simple_character,
    y_monomial,
    y_table,
    z_character,
)
from .sl3 import (
    CASES,
    LAMBDAS,
    SimpleLabelA2L2,
    TABLE as Y2TABLE,
    chi,
    conjecture_seed,
    decompose_l2,
    frobenius_character_sl3,
    key_monomial,
    simple_character_l2,
)
from .typec import LAMBDA, ClusterMonomial, chebyshev_S, crossing, typec

DEFAULT_DEGREE_BOUND = 6
# past this degree images are built from the generator images instead
ROUNDTRIP_DEGREE = 4
ETA_ROUNDTRIP_DEGREE = 3


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)
    params: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool, detail: str = ""):
        self.checks.append(Check(name, bool(ok), detail))
        return ok

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def summary(self) -> dict:
        groups: dict = {}
        for c in self.checks:
            g = c.name.split(":")[0]
            passed, total = groups.get(g, (0, 0))
            groups[g] = (passed + c.ok, total + 1)
        return groups

    def to_json_obj(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "params": self.params,
            "groups": {g: {"passed": p, "total": t} for g, (p, t) in self.summary().items()},
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.checks],
        }


# --------------------------------------------------------------------------
# sl2


class PhiMap:
    """The map from the type C_{l-1} algebra to the sl2 character ring."""

    def __init__(self, l: int):
        if l < 2:
            raise ValueError("l must be at least 2")
        self.l = l
        self.n = l - 1
        self.C = typec(self.n)
        self.small_images = {f"s{j}": kr_character(j, 1, l) for j in range(self.n + 1)}

    def of_small(self, q: LaurentPoly) -> LaurentPoly:
        return substitute(q, self.small_images, y_table(self.l))

    def __call__(self, p: LaurentPoly) -> LaurentPoly:
        """Image of an element given in the initial cluster variables."""
        return self.of_small(self.C.express_in_small(p))

    def dictionary(self, orb) -> LaurentPoly:
        """Character assigned to an orbit: the string on its short side."""
        if orb is None:
            return y_table(self.l).one()
        return kr_character(orb.j, orb.c, self.l)

    def label(self, m: ClusterMonomial, frobenius: int) -> SimpleLabelA1:
        return SimpleLabelA1.make({KRString(o.j, o.c): k for o, k in m.orbits}, frobenius, self.l)


def verify_phi(
    l: int,
    degree_bound: int = DEFAULT_DEGREE_BOUND,
    seed: int = 0,
    pairs: int = 20,
    roundtrip_degree: int = ROUNDTRIP_DEGREE,
) -> Report:
    rep = Report(f"phi l={l}", params={"l": l, "degree_bound": degree_bound, "seed": seed})
    phi = PhiMap(l)
    C = phi.C
    Yt = y_table(l)
    lam_image = z_character(l)

    # (a) generators
    rep.add("generators:lambda", phi(C.lam()) == lam_image, "lam -> z")
    for orb, x in sorted(C.expansions.items()):
        rep.add(f"generators:{orb}", phi(x) == phi.dictionary(orb), f"{orb} -> W({orb.j},{orb.c})")

    # (b) relations, evaluated directly through the dictionary
    def side(terms):
        total = Yt.zero()
        for coef, e, orbs in terms:
            t = Yt.const(coef) * lam_image ** e
            for o in orbs:
                t = t * phi.dictionary(o)
            total = total + t
        return total

    for rel in C.relations():
        rep.add(f"relations:{rel.name}", side(rel.lhs) == side(rel.rhs), rel.describe())
    for key in sorted(C.clusters(), key=lambda k: sorted(k)):
        orbs = sorted(key)
        pairwise = all(not crossing(a, b) for a, b in itertools.combinations(orbs, 2))
        rep.add(f"clusters:{'|'.join(map(str, orbs))}", pairwise and len(orbs) == C.n)
    # compatibility: in a common cluster <=> non-crossing strings
    together = set()
    for key in C.clusters():
        for a, b in itertools.combinations(sorted(key), 2):
            together.add((a, b))
    orbs = sorted(C.expansions)
    agree = all(((a, b) in together) == (not crossing(a, b)) for a, b in itertools.combinations(orbs, 2))
    rep.add("clusters:compatibility", agree, "same cluster iff non-crossing")

    # (c) small monomials -> standard modules; the Laurent round trip
    # through the initial variables is exact but costly, so it is capped
    images = {}
    for a in itertools.product(range(degree_bound + 1), repeat=C.n + 1):
        if sum(a) > degree_bound:
            continue
        s = C.small_monomial(a)
        standard = Yt.one()
        for j, e in enumerate(a):
            standard = standard * kr_character(j, 1, l) ** e
        if sum(a) <= roundtrip_degree:
            rep.add(f"standard:{a}", phi(C.from_small(s)) == standard)
        images[a] = standard
        top = leading_dominant(standard)
        rep.add(f"standard-top:{a}", top is not None and top == (next(iter(s.terms)), 1))
    rep.add("standard:distinct", len(set(images.values())) == len(images))

    # (d) generalized cluster monomials -> simple modules
    seen = {}
    for k, m, value in C.basis_B(degree_bound):
        lab = phi.label(m, k)
        lab.check(l)
        small = C.small_value(m, k)
        if C.degree(ClusterMonomial(k, m.orbits)) <= roundtrip_degree:
            rep.add(f"roundtrip:S{k}*{m}", C.express_in_small(value) == small)
        image = phi.of_small(small)
        ok = image == simple_character(lab, l)
        rep.add(f"simple:S{k}*{m}", ok, str(lab))
        seen[lab] = image
    rep.add("simple:distinct", len(set(seen.values())) == len(seen))
    # every simple label within the bound is reached
    fundamentals = {SimpleLabelA1.make({KRString(j, 1): 1}, 0, l) for j in range(l)}
    rep.add("simple:fundamentals", fundamentals <= set(seen))
    # onto: each dominant monomial of degree <= bound labels a reached class
    targets = {
        factor_dominant(y_monomial(l, e), l)
        for e in itertools.product(range(degree_bound + 1), repeat=l)
        if sum(e) <= degree_bound
    }
    rep.add("simple:onto", targets == set(seen), f"{len(targets)} labels")
    # the simple images are simple: peeling returns the label itself
    for lab in itertools.islice(sorted(seen, key=str), 200):
        dec = decompose([lab], l)
        rep.add(f"simple-peel:{lab}", dict(dec) == {lab: 1})

    # ring homomorphism on random basis pairs
    rng = random.Random(seed)
    basis = C.basis_B(min(roundtrip_degree, max(1, degree_bound // 2)))
    for _ in range(pairs):
        (_, _, p), (_, _, q) = rng.choice(basis), rng.choice(basis)
        rep.add("homomorphism:pair", phi(p * q) == phi(p) * phi(q))
    return rep


# --------------------------------------------------------------------------
# sl3, l = 2

# cluster variables along the 8-cycle starting at (x1, x2): mu1, mu2, mu1, ...
ETA_DICTIONARY = {
    "x1": "Y1_0",
    "x2": "Y1_0*Y2_3",
    "x3": "Y2_3",
    "x4": "Y1_2*Y2_3",
    "x5": "Y1_2",
    "x6": "Y1_2*Y2_1",
    "x7": "Y2_1",
    "x8": "Y1_0*Y2_1",
}
ETA_LAMBDAS = {"lam1": "bold1", "lam2": "bold2"}


def g2_labelled_variables(seed=None) -> dict[str, LaurentPoly]:
    """Name the eight cluster variables by walking the cycle mu1, mu2, ..."""
    s = seed if seed is not None else conjecture_seed(2)
    names = {"x1": s.x[0], "x2": s.x[1]}
    for step in range(6):
        k = 1 if step % 2 == 0 else 2
        s = mutate(s, k)
        names[f"x{step + 3}"] = s.x[k - 1]
    return names


def verify_eta(
    degree_bound: int = DEFAULT_DEGREE_BOUND,
    seed: int = 0,
    pairs: int = 20,
    roundtrip_degree: int = ETA_ROUNDTRIP_DEGREE,
) -> Report:
    rep = Report("eta sl3 l=2", params={"degree_bound": degree_bound, "seed": seed})
    G = conjecture_seed(2)
    graph = enumerate_graph(G)
    rep.add("graph:size", graph.num_nodes == 8 and len(graph.cluster_variables()) == 8)
    xs = g2_labelled_variables(G)
    image = {name: chi(key) for name, key in ETA_DICTIONARY.items()}
    lam_image = {name: chi(key) for name, key in ETA_LAMBDAS.items()}

    def eta(p: LaurentPoly) -> LaurentPoly:
        bind = {"x1": image["x1"], "x2": image["x2"], **lam_image}
        return substitute(p, bind, Y2TABLE)

    # (a) the dictionary is the image of every cluster variable
    for name, x in xs.items():
        rep.add(f"dictionary:{name}", eta(x) == image[name], f"{name} -> L({ETA_DICTIONARY[name]})")

    # (b) every exchange relation of the graph maps to an identity
    formal = VarTable(list(xs) + list(LAMBDAS))
    by_value = {v: k for k, v in xs.items()}
    for key, s in graph.nodes.items():
        names = [by_value[v] for v in s.x]
        for k in range(1, 3):
            t = mutate(s, k)
            new = by_value[t.x[k - 1]]
            up = formal.one()
            um = formal.one()
            for j in range(2):
                beta = s.B.beta(j, k - 1)
                if beta > 0:
                    up = up * LaurentPoly.var(formal, names[j], beta)
                elif beta < 0:
                    um = um * LaurentPoly.var(formal, names[j], -beta)
            rhs = formal.zero()
            pk = s.p[k - 1]
            dk = len(pk) - 1
            for r, tm in enumerate(pk):
                coef = formal.monomial(dict(zip(LAMBDAS, tm)))
                rhs = rhs + coef * up ** r * um ** (dk - r)
            lhs = LaurentPoly.var(formal, names[k - 1]) * LaurentPoly.var(formal, new)
            bind = {**image, **lam_image}
            ok = substitute(lhs, bind, Y2TABLE) == substitute(rhs, bind, Y2TABLE)
            rep.add(f"relations:{names[k - 1]}*{new}", ok, f"{lhs} = {rhs}")

    # (c) monomials in x1, x3, x5, x7 -> standard modules
    gens = ["x1", "x3", "x5", "x7"]
    std = {}
    for a in itertools.product(range(degree_bound + 1), repeat=4):
        if sum(a) > degree_bound:
            continue
        mono = formal.one()
        ch = Y2TABLE.one()
        top = Y2TABLE.one()
        for g, e in zip(gens, a):
            mono = mono * LaurentPoly.var(formal, g, e)
            ch = ch * image[g] ** e
            top = top * key_monomial(ETA_DICTIONARY[g]) ** e
        if sum(a) <= roundtrip_degree:
            rep.add(f"standard:{a}", eta(substitute(mono, xs, G.table)) == ch)
        std[a] = ch
        rep.add(f"standard-top:{a}", leading_dominant(ch) == (next(iter(top.terms)), 1))
    rep.add("standard:distinct", len(set(std.values())) == len(std))

    # (d) clusters <-> the eight cases, and generalized cluster monomials -> simples
    cases_seen = {}
    for key, s in graph.nodes.items():
        names = sorted(by_value[v] for v in s.x)
        keys = {ETA_DICTIONARY[n] for n in names}
        single = next(k for k in keys if "*" not in k)
        pair = next(k for k in keys if "*" in k)
        case = next(c for c, v in CASES.items() if v == (single, pair))
        cases_seen[case] = names
        rep.add(f"cases:{'|'.join(names)}", True, f"case ({case})")
    rep.add("cases:bijective", sorted(cases_seen) == sorted(CASES))

    images = {}
    lam1, lam2 = (LaurentPoly.var(G.table, n) for n in LAMBDAS)
    from .sl3 import pieri_polynomial

    for case, names in cases_seen.items():
        single_name = next(n for n in names if "*" not in ETA_DICTIONARY[n])
        pair_name = next(n for n in names if "*" in ETA_DICTIONARY[n])
        for a, b, k, ell in itertools.product(range(degree_bound + 1), repeat=4):
            if a + 2 * b + 2 * k + 2 * ell > degree_bound:
                continue
            lab = SimpleLabelA2L2(case, a, b, k, ell)
            S = pieri_polynomial(k, ell)
            img = substitute(S, {"X1": lam_image["lam1"], "X2": lam_image["lam2"]}, Y2TABLE)
            img = img * image[single_name] ** a * image[pair_name] ** b
            if a + 2 * b + 2 * k + 2 * ell <= roundtrip_degree:
                value = substitute(S, {"X1": lam1, "X2": lam2}, G.table)
                value = value * xs[single_name] ** a * xs[pair_name] ** b
                rep.add(f"roundtrip:{lab}", eta(value) == img)
            ok = img == simple_character_l2(lab)
            canon = lab.canonical()
            images[canon] = img
            rep.add(f"simple:{lab}", ok)
    rep.add("simple:distinct", len(set(images.values())) == len(images))
    for lab in sorted(images)[:200]:
        rep.add(f"simple-peel:{lab}", dict(decompose_l2([lab])) == {lab.canonical(): 1})
    rng = random.Random(seed)
    names = sorted(xs)
    for _ in range(pairs):
        u, v = rng.choice(names), rng.choice(names)
        rep.add(f"homomorphism:{u}*{v}", eta(xs[u] * xs[v]) == image[u] * image[v])
    rep.add("frobenius:S11", frobenius_character_sl3(1, 1) == chi("bold1") * chi("bold2") - 1)
    return rep


__all__ = ["Report", "verify_phi", "verify_eta", "PhiMap", "ETA_DICTIONARY", "g2_labelled_variables"]
