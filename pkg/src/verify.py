#!/usr/bin/env python3
"""Reproducible verification suite for a quantum complete intersection.

Each check is a function of a SuiteContext and returns a CheckResult. The
report carries no timestamps, so the same config and seed give byte-identical
JSON.
"""

import json
import logging
from dataclasses import dataclass, field
from math import prod
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from artranslate import (ar_sequence_ending_at, additive_function, classify_component, explore_component,
                         nakayama_orbit_sum, tau, tau_syzygy_first)
from decomp import (DEFAULT_ISO_TRIALS, DEFAULT_RETRIES, Verdict, is_indecomposable, is_isomorphic,
                    is_projective)
from errors import NotDiagonal, NotHomogeneous, QCIError
from homology import (ShortExactSequence, exists_monomorphism, ext_dim, ext_dim_via_cosyzygy, free_module,
                      hom_space, image_hom_restriction_dim, induced_ext_map_rank, les_dimension_check,
                      projective_cover, rad_mod_soc, radical_module, socle_quotient, stable_hom_dim, syzygy)
from modrep import ModuleMap, ModuleRep, direct_sum, invariant_key, simple_module
from qalgebra import Algebra, is_wild, nakayama_automorphism
from quiver_export import fragment_to_dict, to_json
from rankvariety import (eckmann_shapiro_dims, jordan_type, principal_module, random_point, u_element)
from scalars import derive_seed

logger = logging.getLogger(__name__)

SUITES = ("paper", "quick")
STATUSES = ("pass", "fail", "vacuous", "skipped")
CATALOG_SIZE = 10


@dataclass
class CheckResult:
    id: int
    anchor: str
    status: str
    data: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {"id": self.id, "anchor": self.anchor, "status": self.status, "data": self.data}


@dataclass
class VerificationReport:
    config: Dict
    seed: int
    suite: str
    wild: bool
    checks: List[CheckResult]

    @property
    def failed(self) -> List[CheckResult]:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def ok(self) -> bool:
        return not self.failed

    def to_dict(self) -> Dict:
        return {
            "config": self.config,
            "seed": self.seed,
            "suite": self.suite,
            "wild": self.wild,
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_frame(self) -> pd.DataFrame:
        rows = [{"id": c.id, "anchor": c.anchor, "status": c.status} for c in self.checks]
        return pd.DataFrame(rows, columns=["id", "anchor", "status"])


def standard_catalog(algebra: Algebra, seed: int, size: int = CATALOG_SIZE,
                     retries: int = DEFAULT_RETRIES, iso_trials: int = DEFAULT_ISO_TRIALS) -> List[ModuleRep]:
    """Pairwise non-isomorphic small non-projective indecomposables.

    Syzygies of k first, then A u_lambda and A u_lambda^{a-1} for seeded
    random directions.
    """
    k = simple_module(algebra)
    candidates = [k, radical_module(algebra), socle_quotient(algebra), rad_mod_soc(algebra)]
    if algebra.c == 2:
        candidates += [syzygy(k, 2), syzygy(k, -2)]
    if _rank_ready(algebra):
        a = algebra.config.a
        rng = np.random.default_rng(derive_seed(seed, "catalog", algebra.digest()))
        for _ in range(3 * size):
            lam = random_point(algebra, rng)
            candidates.append(principal_module(algebra, lam, 1))
            if a > 2:
                candidates.append(principal_module(algebra, lam, a - 1))
    catalog: List[ModuleRep] = []
    for M in candidates:
        if len(catalog) >= size:
            break
        if M.dim == 0 or is_projective(M) or not is_indecomposable(M, seed, retries):
            continue
        key = invariant_key(M)
        if any(invariant_key(X) == key and is_isomorphic(M, X, seed, iso_trials) for X in catalog):
            continue
        catalog.append(M)
    logger.debug("catalog of %d modules, dims %s", len(catalog), [M.dim for M in catalog])
    return catalog


def _rank_ready(algebra: Algebra) -> bool:
    cfg = algebra.config
    return len(set(cfg.exponents)) == 1 and cfg.exponents[0] % cfg.p != 0


@dataclass
class SuiteContext:
    algebra: Algebra
    seed: int
    suite: str = "paper"
    retries: int = DEFAULT_RETRIES
    iso_trials: int = DEFAULT_ISO_TRIALS
    max_sequences: int = 64
    _catalog: Optional[List[ModuleRep]] = None
    _fragments: Dict[Tuple[str, int], object] = field(default_factory=dict)

    @property
    def quick(self) -> bool:
        return self.suite == "quick"

    @property
    def char_divides(self) -> bool:
        cfg = self.algebra.config
        return any(a % cfg.p == 0 for a in cfg.exponents)

    @property
    def tame(self) -> bool:
        return not is_wild(self.algebra.config)

    @property
    def exterior(self) -> bool:
        cfg = self.algebra.config
        return all(a == 2 for a in cfg.exponents) and all(
            cfg.q(i, j) == cfg.p - 1 for i in range(cfg.c) for j in range(cfg.c) if i != j)

    def rng(self, name: str) -> np.random.Generator:
        return np.random.default_rng(derive_seed(self.seed, name, self.algebra.digest()))

    @property
    def catalog(self) -> List[ModuleRep]:
        if self._catalog is None:
            self._catalog = standard_catalog(self.algebra, self.seed, CATALOG_SIZE, self.retries, self.iso_trials)
        return self._catalog

    def fragment(self, name: str, start: ModuleRep, radius: int):
        key = (name, radius)
        if key not in self._fragments:
            self._fragments[key] = explore_component(start, radius, self.seed, self.max_sequences,
                                                     retries=self.retries, iso_trials=self.iso_trials)
        return self._fragments[key]


Check = Callable[[SuiteContext], Tuple[str, Dict]]
CHECKS: List[Tuple[int, str, Check]] = []


def check(check_id: int, anchor: str):
    def register(fn: Check) -> Check:
        CHECKS.append((check_id, anchor, fn))
        return fn
    return register


def _skip(reason: str) -> Tuple[str, Dict]:
    return "skipped", {"reason": reason}


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


# --- 1-5: the algebra and its cyclic subalgebras ----------------------------------

@check(1, "dimension is the product of the exponents; associativity on the full basis")
def check_algebra_axioms(ctx: SuiteContext):
    A = ctx.algebra
    expected = prod(A.config.exponents)
    associative = A.check_associativity()
    structure = A.check_structure()
    return _status(A.dimension == expected and associative and structure), {
        "dim": A.dimension, "expected": expected, "associative": associative, "structure": structure}


@check(2, "u_lambda^a = 0")
def check_u_nilpotent(ctx: SuiteContext):
    A = ctx.algebra
    try:
        a = A.config.a
    except NotHomogeneous as e:
        return _skip(str(e))
    rng = ctx.rng("u_nilpotent")
    bad = []
    for _ in range(100):
        lam = random_point(A, rng)
        if not u_element(A, lam).power(a).is_zero():
            bad.append(list(lam.lambdas))
    return _status(not bad), {"samples": 100, "violations": bad}


@check(3, "dim A u_lambda^(a-1) = a^(c-1); A is free over k[u_lambda]")
def check_principal_dim(ctx: SuiteContext):
    A = ctx.algebra
    if not _rank_ready(A):
        return _skip("needs equal exponents prime to the characteristic")
    a, c = A.config.a, A.c
    rng = ctx.rng("principal_dim")
    rows = []
    for _ in range(20):
        lam = random_point(A, rng)
        # dim A u^s = (a - s) a^(c-1); s = a - 1 is the module induced from k
        dims = [principal_module(A, lam, s).dim for s in range(1, a)]
        rows.append(dims)
    expected = [(a - s) * a ** (c - 1) for s in range(1, a)]
    return _status(all(d == expected for d in rows)), {"expected": expected, "dims": rows}


@check(4, "Omega(A u) = A u^(a-1) and Omega^2(A u) = A u")
def check_principal_period(ctx: SuiteContext):
    A = ctx.algebra
    if not _rank_ready(A):
        return _skip("needs equal exponents prime to the characteristic")
    a = A.config.a
    rng = ctx.rng("principal_period")
    rows = []
    for _ in range(2 if ctx.quick else 3):
        lam = random_point(A, rng)
        M = principal_module(A, lam, 1)
        first = is_isomorphic(syzygy(M, 1), principal_module(A, lam, a - 1), ctx.seed, ctx.iso_trials)
        second = is_isomorphic(syzygy(M, 2), M, ctx.seed, ctx.iso_trials)
        rows.append({"lambda": list(lam.lambdas), "omega1": first.isomorphic, "omega2": second.isomorphic,
                     "witness": [first.method, second.method]})
    return _status(all(r["omega1"] and r["omega2"] for r in rows)), {"points": rows}


@check(5, "Nakayama automorphism is diagonal and multiplicative; Omega commutes with it")
def check_nakayama(ctx: SuiteContext):
    A = ctx.algebra
    if ctx.char_divides:
        return _skip("characteristic divides an exponent")
    try:
        nu = nakayama_automorphism(A)
    except NotDiagonal as e:
        return "fail", {"error": str(e)}
    data = {"scalars": list(nu.generator_scalars), "order": nu.order(), "multiplicative": nu.is_multiplicative()}
    ok = data["multiplicative"]
    if ctx.exterior:
        expected = 1 if A.c % 2 else 2
        data["expected_order"] = expected
        ok = ok and nu.order() == expected
    commutes = []
    for M in ctx.catalog[:2 if ctx.quick else 4]:
        commutes.append(bool(is_isomorphic(tau(M), tau_syzygy_first(M), ctx.seed, ctx.iso_trials)))
    data["tau_orders_agree"] = commutes
    return _status(ok and all(commutes)), data


# --- 6-7: the AR formula and almost split sequences ------------------------------

@check(6, "stable Hom(W, X) has the dimension of Ext^1(X, tau W)")
def check_ar_formula(ctx: SuiteContext):
    if ctx.char_divides:
        return _skip("characteristic divides an exponent")
    cat = ctx.catalog
    sources = cat[:4] if ctx.quick else cat
    mismatches = []
    pairs = 0
    for i, W in enumerate(sources):
        for j, X in enumerate(cat):
            pairs += 1
            lhs = stable_hom_dim(W, X)
            rhs = ext_dim(X, tau(W), 1)
            if lhs != rhs:
                mismatches.append([i, j, lhs, rhs])
    ok = len(cat) >= CATALOG_SIZE and not mismatches
    return _status(ok), {"catalog": len(cat), "pairs": pairs, "mismatches": mismatches}


@check(7, "almost split sequences: exact, non-split, left end tau of the right end, lifting")
def check_ar_sequences(ctx: SuiteContext):
    if ctx.char_divides:
        return _skip("characteristic divides an exponent")
    rows = []
    for N in ctx.catalog[:2 if ctx.quick else 5]:
        ar = ar_sequence_ending_at(N, ctx.catalog, ctx.seed, ctx.retries, ctx.iso_trials)
        verdicts = ar.check(ctx.seed)
        rows.append({"right_dim": N.dim, "middle": ar.decomposition.dims(), "tests": ar.lifting_tests,
                     **verdicts})
    ok = all(r["exact"] and r["non_split"] and r["left_is_tau"] and r["lifting"] for r in rows)
    return _status(ok), {"sequences": rows}


# --- 8-10: wild boundary, Ext dimension, Eckmann-Shapiro ----------------------------

@check(8, "a = 3, c = 2: rad A / soc A is absolutely indecomposable and sits next to A / soc A")
def check_wild_boundary(ctx: SuiteContext):
    A = ctx.algebra
    cfg = A.config
    if not (A.c == 2 and set(cfg.exponents) == {3}) or ctx.char_divides:
        return _skip("only for a = 3, c = 2")
    R = rad_mod_soc(A)
    verdict = is_indecomposable(R, ctx.seed, ctx.retries).verdict
    N = socle_quotient(A)
    ar = ar_sequence_ending_at(N, None, ctx.seed, ctx.retries, ctx.iso_trials)
    stable = ar.stable_middle()
    middle_ok = (ar.projective_multiplicity() == 1 and len(stable) == 1 and stable[0][1] == 1
                 and bool(is_isomorphic(stable[0][0], R, ctx.seed, ctx.iso_trials)))
    left_ok = bool(is_isomorphic(ar.left, radical_module(A), ctx.seed, ctx.iso_trials))
    ok = verdict is Verdict.ABSOLUTELY_INDECOMPOSABLE and middle_ok and left_ok
    return _status(ok), {"verdict": verdict.value, "middle": ar.decomposition.dims(),
                         "middle_is_A_plus_rad_mod_soc": middle_ok, "left_is_rad_A": left_ok}


@check(9, "a = 2: dim Ext^1(A u, A u) = 2^(c-1)")
def check_ext_dimension(ctx: SuiteContext):
    A = ctx.algebra
    if set(A.config.exponents) != {2} or ctx.char_divides:
        return _skip("only for a = 2")
    rng = ctx.rng("ext_dimension")
    expected = 2 ** (A.c - 1)
    dims = []
    for _ in range(2):
        M = principal_module(A, random_point(A, rng))
        dims.append(ext_dim(M, M, 1))
    return _status(all(d == expected for d in dims)), {"expected": expected, "dims": dims}


@check(10, "Ext^1 from an induced module equals the count over k[u_lambda]")
def check_eckmann_shapiro(ctx: SuiteContext):
    A = ctx.algebra
    if not _rank_ready(A):
        return _skip("needs equal exponents prime to the characteristic")
    a = A.config.a
    rng = ctx.rng("eckmann_shapiro")
    cat = [M for M in ctx.catalog if M.dim <= 2 * A.dimension]
    rows = []
    for _ in range(10):
        picks = sorted(int(x) for x in rng.choice(len(cat), size=int(rng.integers(1, 3)), replace=False))
        L = direct_sum(*(cat[j] for j in picks))
        lam = random_point(A, rng)
        i = int(rng.integers(1, a))
        lhs, rhs = eckmann_shapiro_dims(A, lam, i, L)
        rows.append({"summands": picks, "lambda": list(lam.lambdas), "i": i, "jordan": jordan_type(L, lam).blocks(),
                     "induced_side": lhs, "cyclic_side": rhs})
    return _status(all(r["induced_side"] == r["cyclic_side"] for r in rows)), {"cases": rows}


# --- 11-12: explored components ------------------------------------------------------

@check(11, "d_W is additive on the k-component and constant on tau-orbits")
def check_additive(ctx: SuiteContext):
    A = ctx.algebra
    if not ctx.tame or ctx.char_divides:
        return _skip("only for the tame case a = c = 2")
    frag = ctx.fragment("k", simple_module(A), 3 if ctx.quick else 4)
    mu = random_point(A, ctx.rng("additive"))
    W = nakayama_orbit_sum(principal_module(A, mu))
    report = additive_function(W, frag, ctx.seed)
    return _status(report.additive and report.tau_constant is True), {
        "mu": list(mu.lambdas),
        "values": {str(k): v for k, v in sorted(report.values.items())},
        "additivity_residuals": {str(k): v for k, v in sorted(report.additivity_residuals.items())},
        "tau_constant": report.tau_constant,
    }


@check(12, "component shapes: doubled arrows around k, tubes at A u, an end at rad A")
def check_components(ctx: SuiteContext):
    A = ctx.algebra
    if ctx.char_divides:
        return _skip("characteristic divides an exponent")
    cfg = A.config
    if ctx.tame:
        frag = ctx.fragment("k", simple_module(A), 3 if ctx.quick else 4)
        ev = classify_component(frag)
        lam = random_point(A, ctx.rng("tube"))
        tube = classify_component(ctx.fragment("Au", principal_module(A, lam), 2))
        nonperiodic = not any(v.periodic for v in frag.vertices)
        ok = ev.verdict == "TildeA12Pattern" and nonperiodic and tube.verdict == "Tube"
        return _status(ok), {"k": ev.label(), "k_nonperiodic": nonperiodic, "Au": tube.label(),
                             "lambda": list(lam.lambdas)}
    if A.c == 2 and set(cfg.exponents) == {3}:
        radius = 2 if ctx.quick else 3
        frag = ctx.fragment("radA", radical_module(A), radius)
        ev = classify_component(frag)
        expected = "NonRegularBoundary" if radius < 3 else "AInfinityConsistent"
        ok = ev.verdict == expected and bool(frag.end_vertices())
        return _status(ok), {"radA": ev.label(), "expected": expected, "end_vertices": frag.end_vertices()}
    return _skip("no reference shape for this configuration")


# --- 13: conclusions whose hypotheses never occur --------------------------------------

def _cover_sequence(M: ModuleRep) -> ShortExactSequence:
    cov = projective_cover(M)
    inject = ModuleMap(cov.syzygy, cov.free, cov.kernel)
    return ShortExactSequence(cov.syzygy, cov.free, M, inject, cov.map)


@check(13, "Ext isomorphism, Ext vanishing and Ext dimension conclusions for tree classes that never occur")
def check_vacuity(ctx: SuiteContext):
    A = ctx.algebra
    if ctx.char_divides:
        return _skip("characteristic divides an exponent")
    k = simple_module(A)
    ingredients: Dict[str, bool] = {}
    cover = _cover_sequence(k)
    ingredients["les_cover_k"] = les_dimension_check(cover, k, 1 if ctx.quick else 2).consistent
    ar = ar_sequence_ending_at(k, None, ctx.seed, ctx.retries, ctx.iso_trials)
    W = ctx.catalog[-1]
    ingredients["les_ar_k"] = les_dimension_check(ar.sequence, W, 1).consistent
    # a non-split sequence with absolutely indecomposable left end loses exactly the identity
    left = ar.left
    ingredients["hom_restriction"] = image_hom_restriction_dim(ar.sequence, left) == hom_space(left, left).dim - 1
    ranks = [induced_ext_map_rank(ar.sequence.surject, W, n) for n in (1, 2)]
    ingredients["induced_ranks_bounded"] = all(
        0 <= r <= ext_dim(k, W, n) for r, n in zip(ranks, (1, 2)))
    ingredients["mono_k_into_A"] = exists_monomorphism(k, free_module(A, 1), ctx.seed)[0]
    ingredients["no_mono_radA_into_k"] = not exists_monomorphism(radical_module(A), k, ctx.seed)[0]
    ingredients["cosyzygy_ext"] = all(ext_dim_via_cosyzygy(L, W) == ext_dim(L, W, 1) for L in ctx.catalog[:3])
    conclusions = ["ext isomorphism along the component", "ext vanishing off the component",
                   "ext dimension bound"]
    status = "vacuous" if all(ingredients.values()) else "fail"
    return status, {"conclusions": conclusions,
                    "reason": "their hypothesized tree classes (A_infinity^infinity, D_infinity) do not occur",
                    "induced_ranks": ranks, "ingredients": ingredients}


# --- 14: determinism -------------------------------------------------------------------------

DETERMINISM_PROBE = (2, 3, 4)


@check(14, "identical config and seed give identical output")
def check_determinism(ctx: SuiteContext):
    runs = []
    for _ in range(2):
        fresh = SuiteContext(ctx.algebra, ctx.seed, ctx.suite, ctx.retries, ctx.iso_trials, ctx.max_sequences)
        probe = [_run_check(fresh, cid, anchor, fn).to_dict() for cid, anchor, fn in CHECKS
                 if cid in DETERMINISM_PROBE]
        text = json.dumps(probe, sort_keys=True)
        if not ctx.char_divides:
            frag = explore_component(simple_module(ctx.algebra), 1, ctx.seed, ctx.max_sequences,
                                     retries=ctx.retries, iso_trials=ctx.iso_trials)
            text += to_json(fragment_to_dict(frag))
        runs.append(text)
    return _status(runs[0] == runs[1]), {"probe": list(DETERMINISM_PROBE), "bytes": len(runs[0])}


# --- runner ---------------------------------------------------------------------------------

def _run_check(ctx: SuiteContext, check_id: int, anchor: str, fn: Check) -> CheckResult:
    if ctx.char_divides and check_id > 3:
        return CheckResult(check_id, anchor, "skipped", {"reason": "characteristic divides an exponent"})
    try:
        status, data = fn(ctx)
    except QCIError as e:
        logger.warning("check %d raised %s: %s", check_id, type(e).__name__, e)
        status, data = "fail", {"error": type(e).__name__, "message": str(e)}
    return CheckResult(check_id, anchor, status, data)


def run_suite(algebra: Algebra, seed: int, suite: str = "paper", retries: int = DEFAULT_RETRIES,
              iso_trials: int = DEFAULT_ISO_TRIALS, max_sequences: int = 64,
              only: Optional[List[int]] = None) -> VerificationReport:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES}")
    ctx = SuiteContext(algebra, seed, suite, retries, iso_trials, max_sequences)
    results = []
    for check_id, anchor, fn in sorted(CHECKS, key=lambda t: t[0]):
        if only is not None and check_id not in only:
            continue
        logger.info("check %d: %s", check_id, anchor)
        result = _run_check(ctx, check_id, anchor, fn)
        logger.info("check %d -> %s", check_id, result.status)
        results.append(result)
    return VerificationReport(algebra.config.to_dict(), seed, suite, is_wild(algebra.config), results)
