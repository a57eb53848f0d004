"""The acceptance battery, shared by the CLI and the test suite.

Every criterion returns a :class:`CriterionResult` listing its individual
checks. Nothing here is tuned to pass: expected values are the reference
intervals, and a mismatch is reported as a failed check.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .arcs import arc_members, format_arc
from .core import compose, invert, make_cellspace, make_explicit_map, power
from .nbhd import in_nbhd, out_nbhd
from .qnbhd import (
    composition_bound,
    duality_check,
    iterate_bound,
    offsets_of,
    q_localized,
    quantum_in_nbhd,
    quantum_localized,
    radii,
    simple_bound,
)
from .qsim import ORTHOGONAL_TOL, signaling_demo
from .zoo import make, make_jk, make_jt, make_jt_iterated, make_tk, make_toffoli

DEFAULT_SEED = 7


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        bad = self.failures()
        tail = f"; failed: {'; '.join(f'{c.name} ({c.detail})' for c in bad)}" if bad else ""
        return f"[{status}] criterion {self.number}: {self.title} ({len(self.checks) - len(bad)}/{len(self.checks)} checks){tail}"

    def to_json(self) -> dict:
        return {
            "number": self.number,
            "title": self.title,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


def _interval_check(res: CriterionResult, name: str, sites, lo: int, hi: int, origin: int = 0) -> None:
    ring = sites.space.ring
    want = arc_members(origin + lo, origin + hi, ring)
    got = sites.interval(origin)
    res.add(name, sites.members == want, f"expected [{lo},{hi}], got {format_arc(got) if got else offsets_of(sites, origin)}")


# ---------------------------------------------------------------------------
# Corpora
# ---------------------------------------------------------------------------


def binary_space(n: int, prefix: str = "s"):
    return make_cellspace([(f"{prefix}{i}", 2) for i in range(n)])


def random_bijection(rng: np.random.Generator, domain, codomain):
    return make_explicit_map(domain, codomain, rng.permutation(domain.total_dim))


def all_two_site_bijections():
    space = binary_space(2)
    return [make_explicit_map(space, space, list(p)) for p in itertools.permutations(range(4))]


def sandwich_corpus(seed: int) -> list:
    rng = np.random.default_rng(seed)
    space = binary_space(4)
    return [random_bijection(rng, space, space) for _ in range(200)] + all_two_site_bijections()


def chain_corpus(seed: int) -> list:
    """Chains of 2 or 3 bijections over 3 or 4 binary sites, fresh labels per stage."""
    rng = np.random.default_rng(seed + 1)
    chains = []
    for _ in range(50):
        length = int(rng.integers(2, 4))
        width = int(rng.integers(3, 5))
        spaces = [binary_space(width, prefix=f"x{stage}_") for stage in range(length + 1)]
        chains.append([random_bijection(rng, spaces[i], spaces[i + 1]) for i in range(length)])
    return chains


def oracle_corpus(seed: int) -> list:
    rng = np.random.default_rng(seed + 2)
    space = binary_space(3)
    return all_two_site_bijections() + [random_bijection(rng, space, space) for _ in range(50)]


def _subsets(sites):
    sites = list(sites)
    return [frozenset(c) for r in range(len(sites) + 1) for c in itertools.combinations(sites, r)]


# ---------------------------------------------------------------------------
# Criteria
# ---------------------------------------------------------------------------


def criterion_1(seed: int = DEFAULT_SEED) -> CriterionResult:
    res = CriterionResult(1, "J_k iterates: classical, inverse and quantum intervals")
    for k in (2, 3):
        for n in (1, 2):
            ring = 2 * k * n + 4
            f = power(make_jk(k, ring), n)
            tag = f"J_{k}^{n} ring {ring}"
            _interval_check(res, f"{tag} in", in_nbhd(f, 0), 0, n)
            _interval_check(res, f"{tag} inverse in", in_nbhd(invert(f), 0), -k * n, -n)
            _interval_check(res, f"{tag} quantum", quantum_in_nbhd(f, 0), 0, k * n)
    return res


def criterion_2(seed: int = DEFAULT_SEED) -> CriterionResult:
    res = CriterionResult(2, "Toffoli T and T_k intervals")
    t = make_toffoli()
    _interval_check(res, "T in", in_nbhd(t, 0), 0, 1)
    _interval_check(res, "T^-1 out", out_nbhd(invert(t), 0), -1, 0)
    _interval_check(res, "T quantum", quantum_in_nbhd(t, 0), -1, 2)
    t2 = make_tk(2)
    _interval_check(res, "T_2 quantum", quantum_in_nbhd(t2, 0), -2, 4)
    k, n = 2, 2
    ring = 2 * ((n + 1) * k + k + 1) + 1
    base = make_tk(k, ring)
    chain = [base] * n
    composite = power(base, n)
    q = quantum_in_nbhd(composite, 0)
    bound = arc_members(-k, (n + 1) * k, ring)
    theorem = composition_bound(chain)(0)
    res.add(
        "T_2 twice: quantum inside [-2,6]",
        q.members <= bound,
        f"quantum {offsets_of(q)}, theorem bound {offsets_of(theorem)}",
    )
    res.add("T_2 twice: quantum inside the composition bound", q.members <= theorem.members, f"quantum {offsets_of(q)}")
    res.add(
        "T_2 twice: quantum equals [-2,6]",
        q.members == bound,
        f"got {offsets_of(q)}",
    )
    return res


def criterion_3(seed: int = DEFAULT_SEED) -> CriterionResult:
    res = CriterionResult(3, "JT_{k,l} and its iterated-J variant")
    for k, l in ((2, 1), (3, 1)):
        f = make_jt(k, l)
        tag = f"JT_{k},{l}"
        _interval_check(res, f"{tag} in", in_nbhd(f, 0), 0, l + 1)
        _interval_check(res, f"{tag} inverse in", in_nbhd(invert(f), 0), -k - l, -1)
        _interval_check(res, f"{tag} quantum", quantum_in_nbhd(f, 0), -l, k + 2 * l)
    k, l, n = 2, 1, 2
    f = make_jt_iterated(k, l, n)
    tag = f"JT_{k},{l} with J^{n}"
    _interval_check(res, f"{tag} in", in_nbhd(f, 0), 0, l + n)
    _interval_check(res, f"{tag} inverse in", in_nbhd(invert(f), 0), -k * n - l, -n)
    _interval_check(res, f"{tag} quantum", quantum_in_nbhd(f, 0), -l, k * n + 2 * l)
    return res


def criterion_4(seed: int = DEFAULT_SEED) -> CriterionResult:
    res = CriterionResult(4, "sandwich lower <= quantum <= upper on random explicit maps")
    bad = []
    corpus = sandwich_corpus(seed)
    for i, f in enumerate(corpus):
        report = simple_bound(f)
        if not report.ok:
            bad.append((i, report.violations()))
    res.add(f"{len(corpus)} maps, every site", not bad, f"violations: {bad[:5]}" if bad else "0 violations")
    return res


def criterion_5(seed: int = DEFAULT_SEED) -> CriterionResult:
    res = CriterionResult(5, "duality of forward and inverse quantum schemes")
    corpus = sandwich_corpus(seed)
    bad = [i for i, f in enumerate(corpus) if not duality_check(f)]
    res.add(f"{len(corpus)} maps", not bad, f"violations at {bad[:5]}" if bad else "0 violations")
    return res


def criterion_6(seed: int = DEFAULT_SEED) -> CriterionResult:
    res = CriterionResult(6, "composition bound on random chains")
    bad = []
    chains = chain_corpus(seed)
    for i, chain in enumerate(chains):
        composite = chain[0]
        for g in chain[1:]:
            composite = compose(g, composite)
        bound = composition_bound(chain)
        for y in composite.codomain.sites:
            if not quantum_in_nbhd(composite, y).members <= bound.mapping[y]:
                bad.append((i, y))
    res.add(f"{len(chains)} chains, every site", not bad, f"violations: {bad[:5]}" if bad else "0 violations")
    return res


def criterion_7(seed: int = DEFAULT_SEED) -> CriterionResult:
    res = CriterionResult(7, "three conditions agree with the matrix-element oracle")
    disagreements = []
    total = 0
    for i, f in enumerate(oracle_corpus(seed)):
        for B in _subsets(f.codomain.sites):
            for A in _subsets(f.domain.sites):
                total += 1
                if quantum_localized(f, B, A).holds != q_localized(f, B, A):
                    disagreements.append((i, sorted(B), sorted(A)))
    res.add(
        f"{total} (map, A, B) instances",
        not disagreements,
        f"disagreements: {disagreements[:5]}" if disagreements else "0 disagreements",
    )
    return res


def jk_protocol_words(k: int, ring: int):
    """``v = 0`` and ``w`` with ``w_n^i = 1`` exactly when ``n = i``."""
    letters = [0] * ring
    for i in range(1, k + 1):
        letters[i] |= 1 << (i - 1)
    return 0, tuple(letters)


def criterion_8(seed: int = DEFAULT_SEED) -> CriterionResult:
    res = CriterionResult(8, "one-step signaling through J_2 beyond the classical cone")
    start = time.perf_counter()
    f = make_jk(2, 6)
    v, w = jk_protocol_words(2, 6)
    report = signaling_demo(f, v, w, alice_site=2, bob_site=0, steps=1, name="jk", params={"k": 2, "ring": 6})
    elapsed = time.perf_counter() - start
    res.add("overlap < 1e-12", report.overlap < ORTHOGONAL_TOL, f"overlap {report.overlap}")
    res.add("distance 2 in 1 step", report.distance == 2 and report.steps == 1, f"distance {report.distance}")
    res.add("classically impossible", not report.classical_possible, f"classical nbhd {report.classical_nbhd}")
    res.add("classical nbhd of Bob is {0,1}", set(in_nbhd(f, 0).members) == {0, 1}, str(in_nbhd(f, 0).sorted()))
    res.add("runs in under 1 s", elapsed < 1.0, f"{elapsed:.3f} s")
    return res


ITERATION_ZOO = (
    ("jk", {"k": 2}),
    ("jk", {"k": 3}),
    ("toffoli", {}),
    ("tk", {"k": 2}),
    ("jt", {"k": 2, "l": 1}),
    ("jt", {"k": 3, "l": 1}),
    ("jt_iterated", {"k": 2, "l": 1, "n": 2}),
)


def criterion_9(seed: int = DEFAULT_SEED) -> CriterionResult:
    res = CriterionResult(9, "iterated quantum neighbourhoods inside the closed-form interval")
    for name, params in ITERATION_ZOO:
        a, b, c, d = radii(make(name, **params))
        widest = iterate_bound(a, b, c, d, 3).interval
        ring = 2 * (widest[1] - widest[0] + 1) + 1
        f = make(name, ring, **params)
        for k in (1, 2, 3):
            bound = iterate_bound(a, b, c, d, k)
            q = quantum_in_nbhd(power(f, k), 0)
            res.add(
                f"{name}{params} ^{k}",
                bound.contains(offsets_of(q)),
                f"quantum {offsets_of(q)} vs [{bound.interval[0]},{bound.interval[1]}]",
            )
    return res


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9)


def run_criterion(number: int, seed: int = DEFAULT_SEED) -> CriterionResult:
    start = time.perf_counter()
    res = CRITERIA[number - 1](seed)
    res.seconds = time.perf_counter() - start
    return res


def run_all(seed: int = DEFAULT_SEED) -> list:
    return [run_criterion(i, seed) for i in range(1, len(CRITERIA) + 1)]
