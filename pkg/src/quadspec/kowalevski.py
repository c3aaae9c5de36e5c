"""Integer Kowalevski-exponent search for homogeneous quadratic vector
fields on C^3 with an invariant plane.

The search enumerates unit-fraction solutions of the master equation
sum 1/d_i = 1 under a canonical ordering, expands each d_i into integer
factor pairs (u_i, v_i), filters by the trace relations, extracts the
triples that can sit on an invariant plane, and hands the survivors to
the realizability test.  The module also performs exact verification of
the ODE reductions satisfied by the explicit vector fields attached to
three of the realizable exponent sets.
"""

from __future__ import annotations

import functools
import itertools
import json
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence

from gmpy2 import isqrt, mpq
from sympy import divisors, factorint

from .errors import MissingBound, MixedFields, PreconditionError, QuadspecError
from .groebner import Budget
from .poly import MPoly, lie_derivative
from .projmap import HomQuadVF
from .realizability import TestVerdict, run_test
from .scalars import field_of, make_qe, rat

IntPair = tuple[int, int]

__all__ = [
    "ExponentCandidate",
    "PipelineResult",
    "CandidateStore",
    "enumerate_unit_fractions",
    "expand_factorizations",
    "extract_plane_triples",
    "family_of",
    "ode_dataset",
    "pipeline_seventh_family",
    "verify_ode_reduction",
]


# ---------------------------------------------------------------------------
# unit-fraction enumeration
# ---------------------------------------------------------------------------


def _proper_subset_hits(entries: Sequence[int], target) -> bool:
    """True when some proper nonempty subset of 1/entries sums to target."""
    n = len(entries)
    vals = [mpq(1, d) for d in entries]
    for mask in range(1, (1 << n) - 1):
        total = mpq(0)
        for i in range(n):
            if mask >> i & 1:
                total += vals[i]
        if total == target:
            return True
    return False


def _divisors_of_square(q: int) -> list[int]:
    """Positive divisors of q**2, from the factorization of q."""
    out = [1]
    for p, e in factorint(int(q)).items():
        out = [d * p**k for d in out for k in range(2 * e + 1)]
    return out


def _pair_first_entries(r, last_pos: int, last_negabs: int) -> list[int]:
    """Admissible first entries d of a pair 1/d + 1/d' = r (r != 0).

    Integer solutions satisfy (p*d - q)(p*d' - q) = q**2 for r = p/q, so
    candidate entries are (q + e)/p over signed divisors e of q**2.
    """
    p, q = int(r.numerator), int(r.denominator)
    found = set()
    for e0 in _divisors_of_square(q):
        for e in (e0, -e0):
            num = q + e
            if num == 0 or num % p:
                continue
            d = num // p
            if d == 0:
                continue
            if d > 0:
                if r < 0 or d < last_pos:
                    continue
            else:
                if r > 0 or -d < last_negabs:
                    continue
            found.add(d)
    return sorted(found)


def enumerate_unit_fractions(
    target,
    n: int,
    subset_free: bool = False,
    bound: Optional[int] = None,
    first_at_least: int = 1,
) -> list[tuple[int, ...]]:
    """All n-tuples of nonzero integers with sum of reciprocals equal to
    ``target``, listed under the canonical ordering: the first entry is
    positive, positive entries ascend, negative entries descend (their
    absolute values ascend), and the sign of each entry is dictated by
    whether the running partial sum is below or above the target.

    With ``subset_free`` set, tuples in which a proper nonempty subset
    already sums to the target are discarded.  Balanced tails (-m, m)
    make some enumerations infinite; those require ``bound`` on |m|
    (``MissingBound`` otherwise).  ``first_at_least`` raises the floor
    of the positive entries.
    """
    if n < 1:
        raise PreconditionError("the tuple length must be at least 1")
    target = mpq(rat(target))
    results: list[tuple[int, ...]] = []

    def push(prefix, sums, d, partial, last_pos, last_negabs):
        new_partial = partial + mpq(1, d)
        if subset_free:
            new_sums = sums | {s + mpq(1, d) for s in sums} | {mpq(1, d)}
            if len(prefix) + 1 < n and target in new_sums:
                return
        else:
            new_sums = sums
        rec(prefix + [d], new_sums, new_partial, last_pos, last_negabs)

    def rec(prefix, sums, partial, last_pos, last_negabs):
        k = n - len(prefix)
        if k == 0:
            if partial == target:
                if subset_free and _proper_subset_hits(prefix, target):
                    return
                results.append(tuple(prefix))
            return
        r = target - partial
        if r == 0:
            # the remaining entries must cancel; the tail starts with a
            # negative entry, and every balanced tail (-m, m, ...) is an
            # infinite family.  A (-1, 1) tail merely repeats a unit
            # entry, so the canonical list starts the tails at 2.
            if subset_free or k < 2:
                return
            if bound is None:
                raise MissingBound(
                    "the balanced tails (-m, m) form an infinite family; "
                    "a bound on |m| is required"
                )
            for m in range(max(last_negabs, 2), bound + 1):
                push(prefix, sums, -m, partial, last_pos, m)
            return
        if k == 1:
            # exact closed form: 1/d = r needs a unit numerator
            if abs(r.numerator) != 1:
                return
            d = int(r.numerator * r.denominator)
            if d > 0:
                if d >= last_pos:
                    push(prefix, sums, d, partial, d, last_negabs)
            elif -d >= last_negabs:
                push(prefix, sums, d, partial, last_pos, -d)
            return
        if k == 2:
            # divisor-based listing avoids scanning huge ranges when the
            # remainder is tiny (Sylvester-type chains)
            for d in _pair_first_entries(r, last_pos, last_negabs):
                if d > 0:
                    push(prefix, sums, d, partial, d, last_negabs)
                else:
                    push(prefix, sums, d, partial, last_pos, -d)
            return
        if r > 0:
            hi = int(mpq(k) / r)
            for d in range(last_pos, hi + 1):
                push(prefix, sums, d, partial, d, last_negabs)
        else:
            hi = int(mpq(k) / (-r))
            for m in range(last_negabs, hi + 1):
                push(prefix, sums, -m, partial, last_pos, m)

    rec([], frozenset(), mpq(0), max(first_at_least, 1), 1)
    return results


def family_of(d: Sequence[int]) -> Optional[int]:
    """Smallest cardinality of a subset with sum of reciprocals equal to
    1, or None when no subset reaches 1."""
    vals = []
    for x in d:
        x = int(x)
        if x == 0:
            raise PreconditionError("all products d_i must be nonzero")
        vals.append(mpq(1, x))
    n = len(vals)
    # incremental subset sums: sums[mask] reuses the sum without the
    # lowest set bit, so each of the 2^n - 1 sums costs one addition
    sums = [mpq(0)] * (1 << n)
    best: Optional[int] = None
    for mask in range(1, 1 << n):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + vals[low.bit_length() - 1]
        if sums[mask] == 1:
            size = mask.bit_count()
            if best is None or size < best:
                best = size
    return best


# ---------------------------------------------------------------------------
# factor-pair expansion and the trace relations
# ---------------------------------------------------------------------------


def _canon_pair(p: IntPair) -> IntPair:
    q = (p[1], p[0])
    return p if p <= q else q


@functools.lru_cache(maxsize=None)
def _pair_options(d: int) -> tuple[IntPair, ...]:
    """Unordered integer factor pairs (u, v) with u*v = d, one canonical
    orientation per pair."""
    d = int(d)
    if d == 0:
        raise PreconditionError("all products d_i must be nonzero")
    found = set()
    a = abs(d)
    for u in divisors(a):
        v = a // u
        if u > v:
            continue
        if d > 0:
            found.add(_canon_pair((u, v)))
            found.add(_canon_pair((-u, -v)))
        else:
            found.add(_canon_pair((u, -v)))
            found.add(_canon_pair((-u, v)))
    return tuple(sorted(found))


@functools.lru_cache(maxsize=None)
def _pair_values(d: int):
    """Factor pairs of d with their two trace contributions, plus the
    per-slot minima and maxima of those contributions."""
    vals = []
    for u, v in _pair_options(d):
        vals.append(((u, v), mpq(u + v, d), mpq((u + v) ** 2, d)))
    a3 = [s3 for _, s3, _ in vals]
    a4 = [s4 for _, _, s4 in vals]
    return tuple(vals), min(a3), max(a3), min(a4), max(a4)


def _relation_sums(pairs: Iterable[IntPair]) -> tuple:
    s3 = mpq(0)
    s4 = mpq(0)
    for u, v in pairs:
        d = u * v
        s3 += mpq(u + v, d)
        s4 += mpq((u + v) ** 2, d)
    return s3, s4


def _assignments_matching(
    options: Sequence[Sequence[IntPair]], s3_target, s4_target
) -> list[tuple[IntPair, ...]]:
    """Tuples, one pair per slot, with the two trace sums hitting the
    targets exactly; depth-first search pruned by exact per-slot bounds
    on the two running sums."""
    n = len(options)
    values = []
    for opts in options:
        vals = []
        for u, v in opts:
            d = u * v
            vals.append(((u, v), mpq(u + v, d), mpq((u + v) ** 2, d)))
        values.append(vals)
    # suffix minima/maxima of each sum, for pruning
    lo3 = [mpq(0)] * (n + 1)
    hi3 = [mpq(0)] * (n + 1)
    lo4 = [mpq(0)] * (n + 1)
    hi4 = [mpq(0)] * (n + 1)
    for i in range(n - 1, -1, -1):
        a3 = [s3 for _, s3, _ in values[i]]
        a4 = [s4 for _, _, s4 in values[i]]
        lo3[i] = lo3[i + 1] + min(a3)
        hi3[i] = hi3[i + 1] + max(a3)
        lo4[i] = lo4[i + 1] + min(a4)
        hi4[i] = hi4[i + 1] + max(a4)
    out: list[tuple[IntPair, ...]] = []

    def rec(i, acc, s3, s4):
        if i == n:
            if s3 == s3_target and s4 == s4_target:
                out.append(tuple(acc))
            return
        if not (lo3[i] <= s3_target - s3 <= hi3[i]):
            return
        if not (lo4[i] <= s4_target - s4 <= hi4[i]):
            return
        for pair, a3, a4 in values[i]:
            rec(i + 1, acc + [pair], s3 + a3, s4 + a4)

    rec(0, [], mpq(0), mpq(0))
    out.sort()
    return out


def expand_factorizations(d: Sequence[int]) -> list[tuple[IntPair, ...]]:
    """All assignments of integer factor pairs (u_i, v_i) with
    u_i v_i = d_i, up to swapping within a pair, that satisfy the three
    trace relations sum 1/d = 1, sum (u+v)/d = 4, sum (u+v)^2/d = 16
    (the first one is a property of d alone)."""
    ds = tuple(int(x) for x in d)
    if len(ds) != 7:
        raise PreconditionError("expected seven products")
    if any(x == 0 for x in ds):
        raise PreconditionError("all products d_i must be nonzero")
    if sum(mpq(1, x) for x in ds) != 1:
        return []
    options = [_pair_options(x) for x in ds]
    return _assignments_matching(options, mpq(4), mpq(16))


def extract_plane_triples(
    pairs: Sequence[IntPair],
) -> list[tuple[tuple[IntPair, IntPair, IntPair], tuple[IntPair, ...]]]:
    """All ways to pick three of the seven pairs, with an orientation
    (tangent entry first), so that sum 1/u = 1 and sum v/u = 1; returns
    (oriented triple, remaining four pairs), deduplicated as multisets."""
    ps = [(int(u), int(v)) for u, v in pairs]
    if len(ps) != 7:
        raise PreconditionError("expected seven exponent pairs")
    if any(u == 0 or v == 0 for u, v in ps):
        raise PreconditionError("all exponents must be nonzero")
    seen = set()
    out = []
    for idx in itertools.combinations(range(7), 3):
        rest = tuple(sorted(_canon_pair(ps[i]) for i in range(7) if i not in idx))
        for flips in itertools.product((0, 1), repeat=3):
            trip = tuple(
                (ps[i][1], ps[i][0]) if f else ps[i] for i, f in zip(idx, flips)
            )
            if sum(mpq(1, u) for u, _ in trip) != 1:
                continue
            if sum(mpq(v, u) for u, v in trip) != 1:
                continue
            on = tuple(sorted(trip))
            key = (on, rest)
            if key not in seen:
                seen.add(key)
                out.append((on, rest))
    return out


# ---------------------------------------------------------------------------
# candidates, verdicts, and the persisted store
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentCandidate:
    """Seven integer exponent pairs, four off the invariant plane and
    three on it (tangent entry first within the on-plane pairs)."""

    off: tuple[IntPair, IntPair, IntPair, IntPair]
    on: tuple[IntPair, IntPair, IntPair]
    family: Optional[int]
    verdict: Optional[TestVerdict] = None
    error: Optional[str] = None

    @classmethod
    def from_pairs(cls, off: Sequence[IntPair], on: Sequence[IntPair]) -> "ExponentCandidate":
        offc = tuple(sorted(_canon_pair((int(u), int(v))) for u, v in off))
        onc = tuple(sorted((int(u), int(v)) for u, v in on))
        if len(offc) != 4 or len(onc) != 3:
            raise PreconditionError("expected four off-plane and three on-plane pairs")
        if any(u == 0 or v == 0 for u, v in offc + onc):
            raise PreconditionError("all exponents must be nonzero")
        return cls(offc, onc, family_of([u * v for u, v in offc + onc]))

    @property
    def pairs(self) -> tuple[IntPair, ...]:
        return self.off + self.on

    @property
    def key(self) -> str:
        return json.dumps([list(self.off), list(self.on)])

    def status(self) -> str:
        if self.error is not None:
            return "error"
        if self.verdict is None:
            return "pending"
        return self.verdict.status

    def to_json(self) -> dict:
        return {
            "off": [list(p) for p in self.off],
            "on": [list(p) for p in self.on],
            "family": self.family,
            "verdict": self.verdict.to_json() if self.verdict is not None else None,
            "error": self.error,
        }

    @classmethod
    def from_json(cls, payload: dict) -> "ExponentCandidate":
        base = cls.from_pairs(
            [tuple(p) for p in payload["off"]], [tuple(p) for p in payload["on"]]
        )
        verdict = None
        if payload.get("verdict") is not None:
            v = payload["verdict"]
            verdict = TestVerdict(
                status=v["status"], fourth_point_ok=v["fourth_point_ok"]
            )
        return replace(base, verdict=verdict, error=payload.get("error"))


class CandidateStore:
    """Append-only JSONL store of pipeline candidates; the latest line
    for a given pair set wins, which makes interrupted runs resumable."""

    def __init__(self, path):
        self.path = Path(path)
        self._index: dict[str, ExponentCandidate] = {}
        if self.path.exists():
            with self.path.open() as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    cand = ExponentCandidate.from_json(json.loads(line))
                    self._index[cand.key] = cand

    def lookup(self, cand: ExponentCandidate) -> Optional[ExponentCandidate]:
        return self._index.get(cand.key)

    def record(self, cand: ExponentCandidate) -> None:
        payload = cand.to_json()
        payload["time"] = time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime())
        with self.path.open("a") as fh:
            fh.write(json.dumps(payload) + "\n")
        self._index[cand.key] = cand


def _test_candidate(cand: ExponentCandidate, budget: Optional[Budget] = None) -> ExponentCandidate:
    off_uv = [(rat(u), rat(v)) for u, v in cand.off]
    on_uv = [(rat(u), rat(v)) for u, v in cand.on]
    try:
        verdict = run_test(off_uv, on_uv, budget=budget)
    except QuadspecError as exc:  # budget/degeneracy recorded, not fatal
        return replace(cand, error=f"{type(exc).__name__}: {exc}")
    return replace(cand, verdict=verdict)


def _worker(args) -> ExponentCandidate:
    cand, max_reductions, max_degree = args
    budget = Budget()
    if max_reductions is not None:
        budget.max_reductions = max_reductions
    if max_degree is not None:
        budget.max_degree = max_degree
    return _test_candidate(cand, budget)


# ---------------------------------------------------------------------------
# the three seventh-family pipelines
# ---------------------------------------------------------------------------

_CASE_ALIASES = {
    "2pos": "2pos",
    "u1v1_positive": "2pos",
    "2neg": "2neg",
    "u1v1_negative": "2neg",
    "geq3": "geq3",
    "all_d_geq_3": "geq3",
}


@dataclass
class PipelineResult:
    case: str
    candidates: list[ExponentCandidate]
    pre_dedup_count: int

    def passed(self) -> list[ExponentCandidate]:
        return [c for c in self.candidates if c.verdict is not None and c.verdict.passed]


@functools.lru_cache(maxsize=None)
def _n_m_choices(k: int) -> tuple[tuple[int, int], ...]:
    """Integer (n, m), m != 0, with n*(n+m) = k."""
    out = set()
    for u in divisors(abs(k)):
        for n in (u, -u):
            w, r = divmod(k, n)
            if r:
                continue
            m = w - n
            if m != 0:
                out.add((n, m))
    return tuple(sorted(out))


def _expansion_feasible(off_ds: Sequence[int], s3_target, s4_target) -> bool:
    """Cheap interval check: can any factor-pair assignment of the given
    products reach the two trace targets?"""
    lo3 = hi3 = lo4 = hi4 = mpq(0)
    for d in off_ds:
        _, m3, x3, m4, x4 = _pair_values(int(d))
        lo3 += m3
        hi3 += x3
        lo4 += m4
        hi4 += x4
    return lo3 <= s3_target <= hi3 and lo4 <= s4_target <= hi4


def _expand_with_fixed_on(
    off_ds: Sequence[int], on: tuple[IntPair, IntPair, IntPair]
) -> Iterator[ExponentCandidate]:
    s3_on, s4_on = _relation_sums(on)
    options = [_pair_options(x) for x in off_ds]
    for off in _assignments_matching(options, mpq(4) - s3_on, mpq(16) - s4_on):
        yield ExponentCandidate.from_pairs(off, on)


def _two_positive_candidates(bound: int) -> Iterator[ExponentCandidate]:
    # (u1, v1) = (1, 2) on the plane; the other two in-plane orbits have
    # tangent exponents m and -m, so their pairs are (m, n) and
    # (-m, n+m), and the master equation reduces to five reciprocals
    # summing to 1/2 with no proper subset reaching 1/2, one of the five
    # being n*(n+m)
    for ks in enumerate_unit_fractions(mpq(1, 2), 5, subset_free=True, bound=bound):
        for k in sorted(set(ks)):
            rest = list(ks)
            rest.remove(k)
            for n, m in _n_m_choices(k):
                if n + m == 0:
                    continue
                on = ((1, 2), (m, n), (-m, n + m))
                s3_on, s4_on = _relation_sums(on)
                if not _expansion_feasible(rest, mpq(4) - s3_on, mpq(16) - s4_on):
                    continue
                # the constructor computes the family of the full product
                # tuple; only seventh-family sets qualify
                for cand in _expand_with_fixed_on(rest, on):
                    if cand.family == 7:
                        yield cand


def _two_negative_candidates(bound: int) -> Iterator[ExponentCandidate]:
    # (u1, v1) = (-1, -2): both remaining in-plane tangent exponents are
    # 1 and the pairs are (1, m), (1, -1-m); the special reciprocal is
    # 1/(m(m+1)), so only products of consecutive integers qualify
    for ks in enumerate_unit_fractions(mpq(1, 2), 5, subset_free=True, bound=bound):
        for k in sorted(set(ks)):
            if k < 2:
                continue
            s = int(isqrt(1 + 4 * k))
            if s * s != 1 + 4 * k or (s - 1) % 2:
                continue
            m = (s - 1) // 2
            if m < 1:
                continue
            rest = list(ks)
            rest.remove(k)
            on = ((-1, -2), (1, m), (1, -1 - m))
            for cand in _expand_with_fixed_on(rest, on):
                if cand.family == 7:
                    yield cand


def pipeline_seventh_family(
    case: str,
    bound: int = 64,
    budget: Optional[Budget] = None,
    store=None,
    jobs: int = 1,
) -> PipelineResult:
    """Run one of the three seventh-family searches end to end: build the
    candidate exponent sets for the case, deduplicate them, and attach a
    realizability verdict to each survivor."""
    try:
        case = _CASE_ALIASES[str(case)]
    except KeyError:
        raise PreconditionError(f"unknown pipeline case {case!r}")
    pre = 0
    deduped: list[ExponentCandidate] = []
    seen: set[str] = set()

    def absorb(cands: Iterable[ExponentCandidate]):
        nonlocal pre
        for cand in cands:
            pre += 1
            if cand.key not in seen:
                seen.add(cand.key)
                deduped.append(cand)

    if case == "2pos":
        absorb(_two_positive_candidates(bound))
    elif case == "2neg":
        absorb(_two_negative_candidates(bound))
    else:
        # no in-plane product equals 2: the smallest positive product is
        # at least 3 and the seven-term enumeration is finite outright;
        # subset-freeness of the full seven-term sum is exactly the
        # seventh-family condition, so no further classification is needed
        for d7 in enumerate_unit_fractions(1, 7, subset_free=True, first_at_least=3):
            for spectrum7 in expand_factorizations(d7):
                pre += 1
                for on, off in extract_plane_triples(spectrum7):
                    cand = ExponentCandidate.from_pairs(off, on)
                    if cand.key not in seen:
                        seen.add(cand.key)
                        deduped.append(cand)

    st = CandidateStore(store) if store is not None else None
    final: dict[str, ExponentCandidate] = {}
    pending: list[ExponentCandidate] = []
    for cand in deduped:
        hit = st.lookup(cand) if st is not None else None
        if hit is not None and hit.status() != "pending":
            final[cand.key] = hit
        else:
            pending.append(cand)

    if pending:
        if jobs > 1:
            from concurrent.futures import ProcessPoolExecutor

            max_red = budget.max_reductions if budget is not None else None
            max_deg = budget.max_degree if budget is not None else None
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = pool.map(_worker, [(c, max_red, max_deg) for c in pending])
                for cand in results:
                    final[cand.key] = cand
                    if st is not None:
                        st.record(cand)
        else:
            for c in pending:
                cand = _test_candidate(c, budget)
                final[cand.key] = cand
                if st is not None:
                    st.record(cand)

    return PipelineResult(case, [final[c.key] for c in deduped], pre)


# ---------------------------------------------------------------------------
# ODE reductions
# ---------------------------------------------------------------------------

_ZVARS = ("z1", "z2", "z3")


def _field_d(*polys: MPoly) -> Optional[int]:
    ds = set()
    for f in polys:
        for c in f.terms.values():
            d = field_of(c)
            if d is not None:
                ds.add(d)
    if len(ds) > 1:
        raise MixedFields("coefficients live in different quadratic fields")
    return ds.pop() if ds else None


def verify_ode_reduction(x: HomQuadVF, seed: MPoly, which: str) -> MPoly:
    """Exact residual of the stated third-order ODE for the function cut
    out by ``seed`` along the flow of ``x``; derivatives are Lie
    derivatives, and a zero residual certifies the identity."""
    if seed.vars != _ZVARS:
        raise PreconditionError("the seed must be a polynomial in z1, z2, z3")
    dx = _field_d(*x.components)
    ds = _field_d(seed)
    if dx is not None and ds is not None and dx != ds:
        raise MixedFields("the seed and the vector field live in different fields")
    f = seed
    f1 = lie_derivative(f, x.components)
    f2 = lie_derivative(f1, x.components)
    f3 = lie_derivative(f2, x.components)
    name = str(which).lower().replace("-", "").replace("_", "")
    if name == "chazyx":
        c = MPoly.const(_ZVARS, make_qe(rat(9, 11), rat(7, 11), 3))
        return f3 - 6 * f * f * f1 - 3 * c * (f1 + f * f) * (f1 + f * f)
    if name == "chazyix":
        return f3 - 18 * (f1 + f * f) * (f1 + 3 * f * f) + 6 * f1 * f1
    if name == "reducedfv":
        return (
            f3 * f3
            - 24 * f3 * f1 * f
            - 192 * f * f * f * f * f
            + 80 * f2 * f * f * f
            + 120 * f1 * f1 * f * f
            + 4 * f2 * f1 * f1
            - 8 * f2 * f2 * f
        )
    raise PreconditionError(f"unknown reduction {which!r}")


def _qe3(a, b, d):
    return make_qe(rat(a), rat(b), d)


def ode_dataset(which: int) -> tuple[HomQuadVF, MPoly, str]:
    """The explicit vector field, seed function, and reduction name for
    the three integrated exponent sets (3, 7 and 8)."""
    z1, z2, z3 = MPoly.gens(_ZVARS)

    def c(a, b, d):
        return MPoly.const(_ZVARS, _qe3(a, b, d))

    if which == 3:
        # one of the two conjugate fields over Q(sqrt 3) whose exponent
        # pairs are the third realizable set; obtained by realizing that
        # set as a self-map and reading the components off, with the
        # seed the unique linear solution of the Chazy X equation
        x1 = z1 * (
            z1
            + c(rat(-14, 11), rat(-1, 22), 3) * z2
            + c(rat(-14, 11), rat(-4, 33), 3) * z3
        )
        x2 = (
            c(rat(161, 55), rat(-137, 110), 3) * z2 * z2
            + c(rat(-16, 5), rat(6, 5), 3) * z1 * z2
            + c(rat(32, 5), rat(-16, 15), 3) * z2 * z3
            + c(rat(14528, 1815), rat(4912, 1815), 3) * (z3 - z1) * z3
        )
        x3 = (
            c(rat(-207, 55), rat(147, 55), 3) * z2 * z3
            + c(rat(6, 5), rat(-6, 5), 3) * z1 * z3
            + c(rat(-81, 55), rat(178, 165), 3) * z3 * z3
            + c(rat(-6219, 2420), rat(3699, 2420), 3) * (z2 - z1) * z2
        )
        seed = c(rat(-5, 22), rat(1, 22), 3) * z2 + c(rat(5, 11), rat(14, 33), 3) * z3
        return HomQuadVF((x1, x2, x3)), seed, "ChazyX"
    if which == 7:
        x1 = 3 * z1 * (c(0, 2, 5) * z1 + c(6, -5, 5) * z2 - c(6, 5, 5) * z3)
        x2 = (
            c(67, 30, 5) * (z1 - z3) * z3
            + c(13, -6, 5) * z1 * z2
            + c(5, -3, 5) * z2 * z2
            + c(82, 48, 5) * z3 * z2
        )
        x3 = -(
            c(67, -30, 5) * (z1 - z2) * z2
            + c(13, 6, 5) * z1 * z3
            + c(5, 3, 5) * z3 * z3
            + c(82, -48, 5) * z3 * z2
        )
        seed = c(rat(9, 2), rat(-3, 2), 5) * z2 - c(rat(9, 2), rat(3, 2), 5) * z3
        return HomQuadVF((x1, x2, x3)), seed, "ChazyIX"
    if which == 8:
        x1 = z1 * (3 * z1 + c(-15, 9, 2) * z2 - 4 * z3)
        x2 = z2 * (10 * z3 - 9 * z1 + c(-3, 9, 2) * z2)
        x3 = (
            c(36, -36, 2) * z2 * z3
            + c(90, -54, 2) * (z1 - z2) * z2
            - z3 * z3
        )
        seed = z3 * z3 + c(27, -18, 2) * (z2 - z1) * z2 - c(6, -6, 2) * z2 * z3
        return HomQuadVF((x1, x2, x3)), seed, "ReducedFV"
    raise PreconditionError(f"no dataset numbered {which!r}")
