#!/usr/bin/env python3
"""AR-translates, almost split sequences and explored pieces of the stable AR-quiver.

tau is the Nakayama functor followed by Omega^2. With <u, v> = <v, nu(u)>
the Nakayama functor D Hom_A(-, A) is the twist by nu^{-1}, so
tau(M) = Omega^2(M twisted by nu^{-1}) and tau^{-1}(M) = Omega^{-2}(M) twisted by nu.
"""

import hashlib
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
import pandas as pd

import linalg
from decomp import (DEFAULT_ISO_TRIALS, DEFAULT_RETRIES, Decomposition, Verdict, decompose,
                    end_algebra, is_indecomposable, is_isomorphic, is_projective,
                    strip_projective_summands)
from errors import (BudgetError, BudgetExceeded, HypothesisViolated, InternalError, MissingSequence,
                    NotIndecomposable, ProjectiveInput, SocleSearchFailed)
from homology import (ShortExactSequence, extension_from_cocycle, factoring_span, hom_space,
                      is_split, projective_cover, stable_hom_dim, syzygy, syzygy_map)
from modrep import ModuleMap, ModuleRep, direct_sum, invariant_key, twist
from qalgebra import Algebra, nakayama_automorphism
from scalars import derive_seed

logger = logging.getLogger(__name__)

MIN_LIFTING_TESTS = 10


# --- tau ------------------------------------------------------------------------

def nakayama_twist(M: ModuleRep, power: int = 1) -> ModuleRep:
    """The Nakayama functor applied `power` times: twist by nu^{-power}."""
    nu = nakayama_automorphism(M.algebra)
    return twist(M, nu.power(-power))


def _require_nonprojective(M: ModuleRep):
    if M.dim == 0 or is_projective(M):
        raise ProjectiveInput()


def tau(M: ModuleRep) -> ModuleRep:
    _require_nonprojective(M)
    cached = M.memo.get("tau")
    if cached is None:
        cached = syzygy(nakayama_twist(M), 2)
        M.memo["tau"] = cached
    return cached


def tau_inverse(M: ModuleRep) -> ModuleRep:
    _require_nonprojective(M)
    cached = M.memo.get("tau_inverse")
    if cached is None:
        cached = nakayama_twist(syzygy(M, -2), -1)
        M.memo["tau_inverse"] = cached
    return cached


def tau_syzygy_first(M: ModuleRep) -> ModuleRep:
    """The other composition order: Omega^2 first, then the Nakayama twist."""
    _require_nonprojective(M)
    return nakayama_twist(syzygy(M, 2))


def tau_power(M: ModuleRep, n: int) -> ModuleRep:
    step = tau if n >= 0 else tau_inverse
    for _ in range(abs(n)):
        M = step(M)
    return M


def tau_period(M: ModuleRep, bound: int, seed: int = 0) -> Optional[int]:
    """Smallest n <= bound with tau^n M isomorphic to M."""
    cur = M
    for n in range(1, bound + 1):
        cur = tau(cur)
        if cur.dim == M.dim and is_isomorphic(cur, M, seed):
            return n
    return None


def nakayama_orbit_sum(W: ModuleRep) -> ModuleRep:
    """W (+) nu(W) (+) ... over the order of nu; tau-stable when tau W is a twist of W."""
    nu = nakayama_automorphism(W.algebra)
    return direct_sum(*(twist(W, nu.power(i)) for i in range(nu.order())))


# --- almost split sequences -------------------------------------------------------

@dataclass(eq=False)
class ARSequence:
    sequence: ShortExactSequence
    cocycle: np.ndarray
    decomposition: Decomposition
    lifting_tests: int = 0
    lifting_failures: int = 0

    @property
    def left(self) -> ModuleRep:
        return self.sequence.left

    @property
    def middle(self) -> ModuleRep:
        return self.sequence.middle

    @property
    def right(self) -> ModuleRep:
        return self.sequence.right

    def stable_middle(self) -> List[Tuple[ModuleRep, int]]:
        return [(X, m) for X, m in self.decomposition.pieces if not is_projective(X)]

    def projective_multiplicity(self) -> int:
        return sum(m for X, m in self.decomposition.pieces if is_projective(X))

    def check(self, seed: int = 0) -> Dict[str, bool]:
        return {
            "exact": self.sequence.check(),
            "non_split": is_split(self.sequence) is None,
            "left_is_tau": bool(is_isomorphic(self.left, tau(self.right), seed)),
            "lifting": self.lifting_tests >= MIN_LIFTING_TESTS and self.lifting_failures == 0,
        }


def _socle_cocycle(N: ModuleRep) -> np.ndarray:
    """A map Omega N -> tau N whose Ext class is nonzero and killed by rad End(N)."""
    p = N.p
    Om = projective_cover(N).syzygy
    L = tau(N)
    H = hom_space(Om, L)
    if H.dim == 0:
        raise SocleSearchFailed("Ext^1(N, tau N) vanishes")
    P = factoring_span(Om, L)
    # rows of Lam annihilate the classes that are zero in Ext
    Lam = linalg.left_nullspace(P, p) if P.shape[1] else linalg.identity(P.shape[0])
    classes = Lam @ H.vectors() % p
    conditions = []
    for R in end_algebra(N).radical:
        Z = syzygy_map(ModuleMap(N, N, R)).matrix
        pulled = H.matrices @ Z % p
        k = pulled.shape[0]
        conditions.append(Lam @ pulled.transpose(0, 2, 1).reshape(k, -1).T % p)
    if conditions:
        sol = linalg.nullspace(np.concatenate(conditions, axis=0), p)
    else:
        sol = linalg.identity(H.dim)
    for c in sol.T:
        if np.any(classes @ c % p):
            return H.combination(c)
    raise SocleSearchFailed("no nonzero Ext class is annihilated by rad End(N)")


def ar_sequence_ending_at(N: ModuleRep, catalog: Optional[Sequence[ModuleRep]] = None, seed: int = 0,
                          retries: int = DEFAULT_RETRIES, iso_trials: int = DEFAULT_ISO_TRIALS) -> ARSequence:
    """0 -> tau N -> E -> N -> 0 from a socle element of Ext^1(N, tau N) over End(N)."""
    _require_nonprojective(N)
    verdict = is_indecomposable(N, seed, retries)
    if not verdict:
        raise NotIndecomposable(f"{N!r} is {verdict.verdict.value}")
    f = _socle_cocycle(N)
    seq = extension_from_cocycle(N, tau(N), f)
    if not seq.check():
        raise InternalError("realized extension is not exact")
    if is_split(seq) is not None:
        raise SocleSearchFailed("chosen Ext class splits")
    ar = ARSequence(seq, f, decompose(seq.middle, seed, retries, iso_trials))
    if catalog is not None:
        ar.lifting_tests, ar.lifting_failures = lifting_test(ar, catalog, seed)
    logger.debug("AR sequence ending at %d-dim module: middle %s", N.dim, ar.decomposition.dims())
    return ar


def _lifts(F: np.ndarray, X: ModuleRep, seq: ShortExactSequence) -> bool:
    p = X.p
    H = hom_space(X, seq.middle)
    if H.dim == 0:
        return not np.any(F)
    images = (seq.surject.matrix @ H.matrices % p).transpose(0, 2, 1).reshape(H.dim, -1).T
    return linalg.solve(images, linalg.vec(F), p) is not None


def lifting_test(ar: ARSequence, catalog: Sequence[ModuleRep], seed: int = 0) -> Tuple[int, int]:
    """Check that maps X -> N from indecomposables X not isomorphic to N, and the radical
    endomorphisms of N, lift through the surjection. Returns (tests, failures)."""
    N = ar.right
    p = N.p
    maps: List[Tuple[ModuleRep, np.ndarray]] = [(N, R) for R in end_algebra(N).radical]
    spaces = []
    for X in catalog:
        if X.dim == 0 or X.algebra != N.algebra or is_isomorphic(X, N, seed):
            continue
        if not is_indecomposable(X, seed):
            continue
        H = hom_space(X, N)
        if H.dim:
            spaces.append((X, H))
            maps.extend((X, F) for F in H.matrices)
    rng = np.random.default_rng(derive_seed(seed, "lifting", N.digest()))
    while len(maps) < MIN_LIFTING_TESTS and spaces:
        X, H = spaces[int(rng.integers(0, len(spaces)))]
        maps.append((X, H.combination(rng.integers(0, p, size=H.dim))))
    failures = sum(0 if _lifts(F, X, ar.sequence) else 1 for X, F in maps)
    if failures:
        logger.warning("%d of %d test maps do not lift through the sequence ending at %r",
                       failures, len(maps), N)
    return len(maps), failures


# --- fragments of the stable AR-quiver ---------------------------------------------

@dataclass(eq=False)
class Vertex:
    id: int
    module: ModuleRep
    key: Tuple
    distance: int
    verdict: str
    orbit: int = -1
    periodic: bool = False
    tau_period: Optional[int] = None
    frontier: bool = False

    @property
    def dim(self) -> int:
        return self.module.dim

    def key_string(self) -> str:
        return f"{self.dim}:{hashlib.sha256(repr(self.key).encode()).hexdigest()[:8]}"


@dataclass
class SequenceRecord:
    """Ending vertex, left vertex, stable middle (vertex, multiplicity), projective multiplicity."""

    end: int
    left: int
    middle: List[Tuple[int, int]]
    projective: int


@dataclass(eq=False)
class QuiverFragment:
    algebra: Algebra
    radius: int
    seed: int
    vertices: List[Vertex] = field(default_factory=list)
    graph: nx.DiGraph = field(default_factory=nx.DiGraph)
    tau_of: Dict[int, int] = field(default_factory=dict)
    records: Dict[int, SequenceRecord] = field(default_factory=dict)
    sequences: Dict[int, ARSequence] = field(default_factory=dict)
    budget_exhausted: bool = False
    flags: List[str] = field(default_factory=list)

    @property
    def start(self) -> Vertex:
        return self.vertices[0]

    def vertex_of(self, M: ModuleRep, seed: Optional[int] = None) -> Optional[Vertex]:
        key = invariant_key(M)
        for v in self.vertices:
            if v.key == key and is_isomorphic(v.module, M, self.seed if seed is None else seed):
                return v
        return None

    def projective_attachments(self) -> List[Tuple[int, int]]:
        return [(r.end, r.projective) for r in self.records.values() if r.projective]

    def end_vertices(self) -> List[int]:
        """Vertices whose ending sequence has a single stable middle summand of multiplicity 1."""
        return sorted(r.end for r in self.records.values() if r.middle and
                      len(r.middle) == 1 and r.middle[0][1] == 1)

    def orbits(self) -> List[List[int]]:
        G = nx.Graph()
        G.add_nodes_from(v.id for v in self.vertices)
        G.add_edges_from(self.tau_of.items())
        return sorted((sorted(c) for c in nx.connected_components(G)), key=lambda c: c[0])

    def valuations(self) -> List[Tuple[int, int, Optional[int], Optional[int]]]:
        return sorted((u, v, d.get("a"), d.get("b")) for u, v, d in self.graph.edges(data=True))


class _Explorer:
    def __init__(self, start: ModuleRep, radius: int, seed: int, max_sequences: int,
                 retries: int, iso_trials: int, catalog: Optional[Sequence[ModuleRep]]):
        self.fragment = QuiverFragment(start.algebra, radius, seed)
        self.seed = seed
        self.max_sequences = max_sequences
        self.retries = retries
        self.iso_trials = iso_trials
        self.catalog = catalog
        self.queue: deque = deque()
        self.by_key: Dict[Tuple, List[Vertex]] = {}

    def vertex(self, M: ModuleRep, distance: int) -> Vertex:
        key = invariant_key(M)
        for v in self.by_key.get(key, []):
            if is_isomorphic(v.module, M, self.seed, self.iso_trials):
                v.distance = min(v.distance, distance)
                return v
        verdict = is_indecomposable(M, self.seed, self.retries).verdict
        v = Vertex(len(self.fragment.vertices), M, key, distance, verdict.value)
        if verdict is Verdict.NOT_ABSOLUTELY_INDECOMPOSABLE:
            self.fragment.flags.append(f"vertex {v.id} is not absolutely indecomposable")
        self.fragment.vertices.append(v)
        self.fragment.graph.add_node(v.id, dim=M.dim)
        self.by_key.setdefault(key, []).append(v)
        self.queue.append(v)
        return v

    def sequence_at(self, w: Vertex):
        frag = self.fragment
        if w.id in frag.records:
            return
        if len(frag.records) >= self.max_sequences:
            raise BudgetExceeded(f"sequence budget of {self.max_sequences} exhausted")
        ar = ar_sequence_ending_at(w.module, self.catalog, self.seed, self.retries, self.iso_trials)
        left = self.vertex(ar.left, w.distance + 1)
        middle = []
        for X, m in ar.stable_middle():
            x = self.vertex(X, w.distance + 1)
            middle.append((x.id, m))
            frag.graph.add_edge(x.id, w.id)
            frag.graph.edges[x.id, w.id]["a"] = m
            frag.graph.add_edge(left.id, x.id)
            frag.graph.edges[left.id, x.id]["b"] = m
        frag.tau_of[w.id] = left.id
        frag.records[w.id] = SequenceRecord(w.id, left.id, middle, ar.projective_multiplicity())
        frag.sequences[w.id] = ar
        logger.info("sequence %d ends at vertex %d (dim %d): middle %s, projective %d",
                    len(frag.records), w.id, w.dim, middle, ar.projective_multiplicity())

    def run(self):
        frag = self.fragment
        while self.queue:
            v = self.queue.popleft()
            if v.distance >= frag.radius:
                v.frontier = True
                continue
            self.sequence_at(v)
            w = self.vertex(tau_inverse(v.module), v.distance + 1)
            self.sequence_at(w)


def _finish(frag: QuiverFragment, period_bound: int):
    # link unexpanded vertices to their translate when it is already a vertex
    for v in list(frag.vertices):
        if v.id not in frag.tau_of:
            t = frag.vertex_of(tau(v.module))
            if t is not None:
                frag.tau_of[v.id] = t.id
    for k, orbit in enumerate(frag.orbits()):
        for vid in orbit:
            frag.vertices[vid].orbit = k
    for v in frag.vertices:
        v.tau_period = _fragment_tau_period(frag, v, period_bound)
        v.periodic = v.tau_period is not None


def _fragment_tau_period(frag: QuiverFragment, v: Vertex, bound: int) -> Optional[int]:
    cur_id: Optional[int] = v.id
    cur = v.module
    for n in range(1, bound + 1):
        if cur_id is not None and cur_id in frag.tau_of:
            cur_id = frag.tau_of[cur_id]
            if cur_id == v.id:
                return n
            cur = frag.vertices[cur_id].module
        else:
            cur_id = None
            cur = tau(cur)
            if cur.dim == v.dim and is_isomorphic(cur, v.module, frag.seed):
                return n
    return None


def explore_component(start: ModuleRep, radius: int, seed: int = 0, max_sequences: int = 64,
                      period_bound: int = 4, retries: int = DEFAULT_RETRIES,
                      iso_trials: int = DEFAULT_ISO_TRIALS,
                      catalog: Optional[Sequence[ModuleRep]] = None) -> QuiverFragment:
    """Breadth-first walk through ending and starting AR sequences up to `radius` steps."""
    _require_nonprojective(start)
    verdict = is_indecomposable(start, seed, retries)
    if not verdict:
        raise NotIndecomposable(f"start module is {verdict.verdict.value}")
    ex = _Explorer(start, radius, seed, max_sequences, retries, iso_trials, catalog)
    ex.vertex(start, 0)
    try:
        ex.run()
    except BudgetError as e:
        frag = ex.fragment
        frag.budget_exhausted = True
        for v in ex.queue:
            v.frontier = True
        _finish(frag, period_bound)
        raise BudgetExceeded(str(e), partial=frag) from e
    _finish(ex.fragment, period_bound)
    logger.info("explored %d vertices with %d sequences", len(ex.fragment.vertices), len(ex.fragment.records))
    return ex.fragment


def arrow_valuation(M: Union[int, ModuleRep], N: Union[int, ModuleRep],
                    fragment: QuiverFragment) -> Tuple[Optional[int], Optional[int]]:
    """(a_MN, b_MN) read from the sequences ending at N and at tau^{-1} M."""

    def vid(X) -> int:
        if isinstance(X, int):
            return X
        v = fragment.vertex_of(X)
        if v is None:
            raise MissingSequence("module is not a vertex of the fragment")
        return v.id

    m, n = vid(M), vid(N)
    a = b = None
    if n in fragment.records:
        a = dict(fragment.records[n].middle).get(m, 0)
    starting = [w for w, left in fragment.tau_of.items() if left == m and w in fragment.records]
    if starting:
        b = dict(fragment.records[starting[0]].middle).get(n, 0)
    if a is None and b is None:
        raise MissingSequence(f"no sequence bounds the arrow {m} -> {n}")
    return a, b


# --- tree-class evidence ---------------------------------------------------------------

@dataclass
class TreeClassEvidence:
    verdict: str
    parameter: Optional[int] = None
    reason: str = ""
    data: Dict = field(default_factory=dict)

    def label(self) -> str:
        if self.verdict == "Inconclusive":
            return f"Inconclusive({self.reason})"
        if self.parameter is not None:
            return f"{self.verdict}({self.parameter})"
        return self.verdict

    def to_dict(self) -> Dict:
        return {"verdict": self.verdict, "parameter": self.parameter, "reason": self.reason,
                "label": self.label(), "data": self.data}


def classify_component(fragment: QuiverFragment) -> TreeClassEvidence:
    """Finite-radius evidence for the tree class of the component around the start vertex."""
    records = list(fragment.records.values())
    known = [x for _, _, a, b in fragment.valuations() for x in (a, b) if x is not None]
    orbits = fragment.orbits()
    periods = {v.id: v.tau_period for v in fragment.vertices}
    data = {
        "valuations": [list(t) for t in fragment.valuations()],
        "tau_periods": {str(k): v for k, v in periods.items()},
        "end_vertices": fragment.end_vertices(),
        "orbits": orbits,
        "non_regular_boundary": bool(fragment.projective_attachments()),
        "projective_attachments": [list(t) for t in fragment.projective_attachments()],
        "radius": fragment.radius,
    }
    if fragment.flags:
        return TreeClassEvidence("Inconclusive", reason="non-absolutely indecomposable vertex", data=data)
    periodic = [v.periodic for v in fragment.vertices]
    if periodic and all(periodic):
        ranks = {v.tau_period for v in fragment.vertices}
        if len(ranks) == 1:
            return TreeClassEvidence("Tube", ranks.pop(), data=data)
        return TreeClassEvidence("Inconclusive", reason=f"mixed tau-periods {sorted(ranks)}", data=data)
    if any(periodic):
        return TreeClassEvidence("Inconclusive", reason="periodic and non-periodic vertices", data=data)
    if not records:
        return TreeClassEvidence("Inconclusive", reason="no sequences computed", data=data)
    doubled = all(len(r.middle) == 1 and r.middle[0][1] == 2 for r in records)
    if doubled and len(orbits) == 2 and known and all(x == 2 for x in known) \
            and fragment.projective_attachments():
        return TreeClassEvidence("TildeA12Pattern", data=data)
    thin = all(len(r.middle) <= 2 and all(m == 1 for _, m in r.middle) for r in records)
    if thin and known and all(x == 1 for x in known) and fragment.end_vertices() \
            and fragment.radius >= 3:
        return TreeClassEvidence("AInfinityConsistent", fragment.radius, data=data)
    if fragment.projective_attachments():
        return TreeClassEvidence("NonRegularBoundary", data=data)
    return TreeClassEvidence("Inconclusive", reason="no known pattern matches", data=data)


# --- additive functions ----------------------------------------------------------------

@dataclass
class AdditiveReport:
    values: Dict[int, int]
    additivity_residuals: Dict[int, int]
    tau_residuals: Optional[Dict[int, int]]

    @property
    def additive(self) -> bool:
        return not any(self.additivity_residuals.values())

    @property
    def tau_constant(self) -> Optional[bool]:
        if self.tau_residuals is None:
            return None
        return not any(self.tau_residuals.values())

    def to_frame(self) -> pd.DataFrame:
        rows = [{"vertex": v, "d_W": d, "residual": self.additivity_residuals.get(v)}
                for v, d in sorted(self.values.items())]
        return pd.DataFrame(rows, columns=["vertex", "d_W", "residual"])


def additive_function(W: ModuleRep, fragment: QuiverFragment, seed: int = 0) -> AdditiveReport:
    """d_W = dim of stable Hom(W, -) on the vertices, with additivity and tau residuals."""
    summands = [X for X, _ in decompose(W, seed).pieces if not is_projective(X)]
    offending = []
    for X in summands:
        if fragment.vertex_of(X, seed) is not None or fragment.vertex_of(syzygy(X, -1), seed) is not None:
            offending.append(repr(X))
    if offending:
        raise HypothesisViolated(offending)
    values = {v.id: stable_hom_dim(W, v.module) for v in fragment.vertices}
    residuals = {}
    for end, ar in sorted(fragment.sequences.items()):
        residuals[end] = (stable_hom_dim(W, ar.middle) - stable_hom_dim(W, ar.left)
                          - stable_hom_dim(W, ar.right))
    tau_res = None
    core = strip_projective_summands(W)[0]
    if core.dim and is_isomorphic(tau(core), core, seed):
        tau_res = {w: values[left] - values[w] for w, left in sorted(fragment.tau_of.items())}
    return AdditiveReport(values, residuals, tau_res)
