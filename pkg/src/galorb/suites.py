"""Seeded property suites behind ``galorb verify`` and the acceptance tests.

A randomized suite is a trial function ``trial(sampler, space)`` returning
``None`` on success or a dict describing the failure.  When a trial fails the
runner re-samples with smaller entry bounds (bisection on the bound) and
reports the smallest failing instance it finds.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from . import galilean as gl
from .catalog import atlas_diff, enumerate_atlas, reference_table, representative, sample_moduli, table_order
from .classifier import (
    SpecialTuple,
    apply_equivalence,
    classify,
    classify_nonaffine,
    isotropy,
    parameter,
)
from .linalg import (
    InnerProductSpace,
    Mat,
    is_orthogonal,
    is_skew_adjoint,
    lift,
    signature,
    signature_of,
    star,
    witt_map,
)
from .sampling import Sampler
from .serialize import encode_matrix, encode_tuple, encode_vector
from .summands import ScopeError


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checks: int
    detail: str = ""
    counterexample: dict[str, Any] | None = None
    report: dict[str, Any] = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{status} {self.name}: {self.checks} checks{extra}"


Trial = Callable[[Sampler, InnerProductSpace], "dict[str, Any] | None"]


def identity_space(n: int) -> InnerProductSpace:
    return InnerProductSpace.full(Mat.identity(n))


DEFAULT_DIMS = (1, 3)


def _trial_seed(seed: int, name: str, n: int, i: int) -> int:
    return random.Random(f"{seed}:{name}:{n}:{i}").getrandbits(64)


def _minimize(trial: Trial, space: InnerProductSpace, seed: int, bound: int, first: dict[str, Any]) -> dict[str, Any]:
    best, lo, hi = first, 1, bound - 1
    while lo <= hi:
        mid = (lo + hi) // 2
        found = None
        for k in range(20):
            found = trial(Sampler.seeded(_trial_seed(seed, "shrink", mid, k), bound=mid, denominator=1), space)
            if found is not None:
                break
        if found is not None:
            best, hi = {**found, "entry_bound": mid}, mid - 1
        else:
            lo = mid + 1
    return best


def run_randomized(name: str, trial: Trial, seed: int, trials: int, dims: Sequence[int] = DEFAULT_DIMS,
                   bound: int = 3) -> SuiteResult:
    checks = 0
    for n in dims:
        space = identity_space(n)
        for i in range(trials):
            sampler = Sampler.seeded(_trial_seed(seed, name, n, i), bound=bound)
            failure = trial(sampler, space)
            checks += 1
            if failure is not None:
                small = {**_minimize(trial, space, seed, bound, failure), "n": n, "trial": i}
                return SuiteResult(name, False, checks, f"violated at n={n}, trial {i}", small)
    return SuiteResult(name, True, checks)


# trial functions


def _fact_a(s: Sampler, space: InnerProductSpace) -> dict[str, Any] | None:
    u, v = s.vector(space.dim), s.vector(space.dim)
    L = lift(space, u, v)
    if L != -lift(space, v, u) or not is_skew_adjoint(space, L) or not lift(space, u, u).is_zero():
        return {"u": encode_vector(u), "v": encode_vector(v)}
    return None


def _fact_b(s: Sampler, space: InnerProductSpace) -> dict[str, Any] | None:
    P = s.isometry_for(space.gram)
    u, v = s.vector(space.dim), s.vector(space.dim)
    if P @ lift(space, u, v) @ P.inverse() != lift(space, P @ u, P @ v):
        return {"P": encode_matrix(P), "u": encode_vector(u), "v": encode_vector(v)}
    return None


def _fact_c(s: Sampler, space: InnerProductSpace) -> dict[str, Any] | None:
    X = s.skew_for(space.gram)
    v, w = s.vector(space.dim), s.vector(space.dim)
    if (star(space, w) @ X @ v).scalar() * 2 != (lift(space, v, w) @ X).trace():
        return {"X": encode_matrix(X), "v": encode_vector(v), "w": encode_vector(w)}
    return None


def _claim1(s: Sampler, space: InnerProductSpace) -> dict[str, Any] | None:
    g, h = s.group_element(space), s.group_element(space)
    ok = gl.embed_group(gl.compose(g, h)) == gl.embed_group(g) @ gl.embed_group(h)
    ok = ok and gl.embed_group(gl.inverse(g)) == gl.embed_group(g).inverse()
    ext = gl.extended_space(space)
    ok = ok and is_orthogonal(ext, gl.embed_group(g))
    if not ok:
        return {"g": _enc_group(g), "h": _enc_group(h)}
    return None


def _eq2(s: Sampler, space: InnerProductSpace) -> dict[str, Any] | None:
    a, b = s.algebra_element(space), s.algebra_element(space)
    ma, mb = gl.embed_algebra(a), gl.embed_algebra(b)
    ok = gl.embed_algebra(gl.bracket(a, b)) == ma @ mb - mb @ ma
    ok = ok and is_skew_adjoint(gl.extended_space(space), ma)
    g = s.group_element(space)
    ok = ok and gl.ad(g, gl.bracket(a, b)) == gl.bracket(gl.ad(g, a), gl.ad(g, b))
    if not ok:
        return {"a": _enc_alg(a), "b": _enc_alg(b), "g": _enc_group(g)}
    return None


def _ad_consistency(s: Sampler, space: InnerProductSpace) -> dict[str, Any] | None:
    g, h, a = s.group_element(space), s.group_element(space), s.algebra_element(space)
    G = gl.embed_group(g)
    ok = gl.embed_algebra(gl.ad(g, a)) == G @ gl.embed_algebra(a) @ G.inverse()
    ok = ok and gl.ad(gl.compose(g, h), a) == gl.ad(g, gl.ad(h, a))
    ok = ok and gl.twisted_ad(gl.compose(g, h), a) == gl.twisted_ad(g, gl.twisted_ad(h, a))
    ok = ok and gl.twisted_ad(g, a).x == g.P @ a.x
    if not ok:
        return {"g": _enc_group(g), "h": _enc_group(h), "a": _enc_alg(a)}
    return None


def _lemma3(s: Sampler, space: InnerProductSpace) -> dict[str, Any] | None:
    g, a, b = s.group_element(space), s.algebra_element(space), s.stabilizer_algebra_element(space)
    if gl.pairing(gl.twisted_ad(g, a), b) != gl.pairing(a, gl.ad(gl.inverse(g), b)):
        return {"g": _enc_group(g), "a": _enc_alg(a), "b": _enc_alg(b)}
    return None


def _gal(s: Sampler, space: InnerProductSpace) -> dict[str, Any] | None:
    g, h = s.stabilizer_group_element(space), s.stabilizer_group_element(space)
    a, b = s.stabilizer_algebra_element(space), s.stabilizer_algebra_element(space)
    A, B = gl.gal_algebra_matrix(a), gl.gal_algebra_matrix(b)
    ok = gl.gal_matrix(gl.compose(g, h)) == gl.gal_matrix(g) @ gl.gal_matrix(h)
    ok = ok and gl.gal_algebra_matrix(gl.bracket(a, b)) == A @ B - B @ A
    if not ok:
        return {"g": _enc_group(g), "h": _enc_group(h), "a": _enc_alg(a), "b": _enc_alg(b)}
    return None


def _sylvester(s: Sampler, space: InnerProductSpace) -> dict[str, Any] | None:
    while True:
        C = Mat([[s.rational() for _ in range(space.dim)] for _ in range(space.dim)])
        if C.det() != 0:
            break
    if signature_of(C.T @ space.gram @ C) != signature(space):
        return {"C": encode_matrix(C)}
    return None


def _witt(s: Sampler, space: InnerProductSpace) -> dict[str, Any] | None:
    # Isotropic vectors are images of the last basis vector under isometries.
    y = s.isometry_for(space.gram) @ Mat.unit(space.dim, space.dim - 1) * s.nonzero_rational()
    P = witt_map(space, y)
    if not is_orthogonal(space, P) or P @ y != Mat.unit(space.dim, space.dim - 1):
        return {"y": encode_vector(y)}
    return None


CASES = ("case1", "zero", "affine", "nonaffine")


def _invariance_trial(case: str) -> Trial:
    def trial(s: Sampler, space: InnerProductSpace) -> dict[str, Any] | None:
        t = s.special_tuple(space, case)
        w = s.witness(space)
        t2 = apply_equivalence(t, w)
        if classify(t2) != classify(t):
            return {"tuple": encode_tuple(t), "image": encode_tuple(t2)}
        return None

    return trial


def _lemma5_trial(s: Sampler, space: InnerProductSpace) -> dict[str, Any] | None:
    t = s.special_tuple(space, s.rng.choice(CASES))
    t2 = apply_equivalence(t, s.witness(space))
    if parameter(t2) != parameter(t):
        return {"tuple": encode_tuple(t), "image": encode_tuple(t2)}
    return None


def _lemma8_trial(s: Sampler, space: InnerProductSpace) -> dict[str, Any] | None:
    t = s.special_tuple(space, "nonaffine")
    t2 = apply_equivalence(t, s.witness(space))
    a, b = classify_nonaffine(t), classify_nonaffine(t2)
    if isotropy(t2) != isotropy(t) or (a.epsilon, a.alpha_sq) != (b.epsilon, b.alpha_sq):
        return {"tuple": encode_tuple(t), "image": encode_tuple(t2)}
    return None


def _enc_group(g: gl.GroupElement) -> dict[str, Any]:
    return {"P": encode_matrix(g.P), "p": encode_vector(g.p)}


def _enc_alg(a: gl.AlgebraElement) -> dict[str, Any]:
    return {"X": encode_matrix(a.X), "x": encode_vector(a.x)}


# deterministic suites


def dimension_check(dims: Iterable[int] = (1, 2, 3)) -> SuiteResult:
    checks, rows = 0, []
    ok = True
    for n in dims:
        space = identity_space(n)
        tilde_dim = n * (n - 1) // 2
        full = len(gl.algebra_basis(space))
        stab = len(gl.stabilizer_basis(space))
        rows.append({"n": n, "algebra": full, "stabilizer": stab})
        ok = ok and full == 3 * n + 3 + tilde_dim and stab == 1 + 2 * n + tilde_dim
        checks += 2
    return SuiteResult("dims", ok, checks, report={"dimensions": rows})


def annihilator_check(dims: Iterable[int] = DEFAULT_DIMS) -> SuiteResult:
    checks, rows, ok = 0, [], True
    for n in dims:
        space = identity_space(n)
        kernel = gl.stabilizer_annihilator(space)
        forms = [gl.match_gauge_form(a) for a in kernel]
        rows.append({"n": n, "kernel_dim": len(kernel), "all_gauge_form": all(f is not None for f in forms)})
        ok = ok and len(kernel) == n + 2 and all(f is not None for f in forms)
        checks += 1 + len(kernel)
    return SuiteResult("fact_e", ok, checks, report={"annihilator": rows})


@dataclass(frozen=True)
class RoundTrip:
    row: str
    reference_row: int | None
    ok: bool
    reason: str = ""
    # (positives, negatives) of the form the representative was built on.
    form_signature: tuple[int, int] | None = None


def round_trip_rows(total_dim: int = 5, total_index: int = 1, y1_values: Sequence[int] = (1, -2)) -> list[RoundTrip]:
    out = []
    atlas = enumerate_atlas(total_dim, total_index)
    for row in table_order(atlas):
        label = row.label()
        reason = ""
        form = None
        try:
            for y1 in y1_values:
                d = sample_moduli(row.shapes, y1=y1)
                t = representative(d)
                sig = signature(t.space)
                form = (sig.positives, sig.negatives)
                got = classify(t)
                if got != d:
                    reason = f"classified as {got.describe()}"
                    break
        except (ValueError, ScopeError) as exc:
            reason = f"{type(exc).__name__}: {exc}"
        out.append(RoundTrip(label, row.reference_row, not reason, reason, form))
    return out


def roundtrip_check() -> SuiteResult:
    rows = round_trip_rows(5, 1) + round_trip_rows(3, 1)
    failed = [r for r in rows if not r.ok]
    detail = f"{len(failed)} rows not realizable" if failed else ""
    report = {
        "failed_rows": [{"row": r.row, "paper_row": r.reference_row, "reason": r.reason} for r in failed],
        "form_signatures": {r.row: list(r.form_signature) for r in rows if r.form_signature},
    }
    return SuiteResult("roundtrip", not failed, len(rows), detail, report=report)


def atlas_check() -> SuiteResult:
    atlas = enumerate_atlas(5, 1)
    diff = atlas_diff(atlas, reference_table().rows)
    flagged = [r for r in atlas.rows if not r.in_reference]
    ok = not diff.missing and len(diff.extra) == 1 and [r.shapes for r in flagged] == list(diff.extra)
    report = {
        "missing": [" + ".join(s.label for s in r) for r in diff.missing],
        "extra": [" + ".join(s.label for s in r) for r in diff.extra],
    }
    return SuiteResult("atlas", ok, len(atlas.rows), f"missing={len(diff.missing)}, extra={len(diff.extra)}", report=report)


# conjugacy search for standardized parameter-nonzero tuples


def orthogonal_sample(seed: int, size: int = 48, n: int = 3) -> list[Mat]:
    """Identity, sign changes, and Cayley/reflection isometries of the identity form."""
    s = Sampler.seeded(seed, bound=2, denominator=2)
    out = [Mat.diag([1 if (k >> i) & 1 == 0 else -1 for i in range(n)]) for k in range(2 ** n)]
    while len(out) < size:
        out.append(s.isometry_for(Mat.identity(n)))
    return out


def _case1_tuple(space: InnerProductSpace, y1: Fraction, middle: Mat, s: Sampler) -> SpecialTuple:
    n = space.n
    Y = s.skew_for(space.gram).with_block(1, 1, middle)
    return SpecialTuple(space, Y, Mat.unit(n + 2, 0) * y1)


def conjugacy_check(seed: int, pairs: int = 50) -> SuiteResult:
    """Brute-force conjugacy over a sampled orthogonal set against decomposition equality."""
    space = identity_space(3)
    group = orthogonal_sample(seed)
    s = Sampler.seeded(_trial_seed(seed, "prop6", 3, 0))
    agree = sound = 0
    mismatches = []
    for i in range(pairs):
        y1 = s.nonzero_rational()
        m1 = s.antisymmetric(3)
        mode = i % 3
        if mode == 0:
            q = group[s.rng.randrange(len(group))]
            m2, y2 = q @ m1 @ q.inverse(), y1
        elif mode == 1:
            m2, y2 = m1 * 2 if not m1.is_zero() else s.antisymmetric(3), y1
        else:
            m2, y2 = s.antisymmetric(3), s.rng.choice([y1, y1 + 1])
        t1, t2 = _case1_tuple(space, y1, m1, s), _case1_tuple(space, y2, m2, s)
        brute = y1 == y2 and any(q @ m1 @ q.inverse() == m2 for q in group)
        decided = classify(t1) == classify(t2)
        if brute:
            sound += 1
        if brute == decided:
            agree += 1
        elif brute and not decided:
            mismatches.append({"pair": i, "kind": "unsound", "t1": encode_tuple(t1), "t2": encode_tuple(t2)})
        elif mode != 2:
            mismatches.append({"pair": i, "kind": "incomplete", "t1": encode_tuple(t1), "t2": encode_tuple(t2)})
    ok = not mismatches
    detail = f"{agree}/{pairs} verdicts agree, {sound} conjugate pairs found"
    return SuiteResult("prop6", ok, pairs, detail, mismatches[0] if mismatches else None,
                       report={"agree": agree, "pairs": pairs, "conjugate": sound})


# registry


RANDOMIZED: dict[str, Trial] = {
    "fact_a": _fact_a,
    "fact_b": _fact_b,
    "fact_c": _fact_c,
    "claim1": _claim1,
    "eq2": _eq2,
    "ad": _ad_consistency,
    "lemma3": _lemma3,
    "gal": _gal,
    "sylvester": _sylvester,
    "witt": _witt,
    "lemma5": _lemma5_trial,
    "lemma8": _lemma8_trial,
    **{f"invariance_{c}": _invariance_trial(c) for c in CASES},
}

DETERMINISTIC: dict[str, Callable[[int, int], SuiteResult]] = {
    "dims": lambda seed, trials: dimension_check(),
    "fact_e": lambda seed, trials: annihilator_check(),
    "prop6": lambda seed, trials: conjugacy_check(seed),
    "roundtrip": lambda seed, trials: roundtrip_check(),
    "atlas": lambda seed, trials: atlas_check(),
}

SUITE_NAMES: tuple[str, ...] = tuple(RANDOMIZED) + tuple(DETERMINISTIC)


def run_suite(name: str, seed: int, trials: int) -> SuiteResult:
    if name in RANDOMIZED:
        return run_randomized(name, RANDOMIZED[name], seed, trials)
    if name in DETERMINISTIC:
        result = DETERMINISTIC[name](seed, trials)
        result.name = name
        return result
    raise KeyError(name)


def result_payload(r: SuiteResult) -> dict[str, Any]:
    out: dict[str, Any] = {"name": r.name, "passed": r.passed, "checks": r.checks}
    if r.detail:
        out["detail"] = r.detail
    if r.counterexample is not None:
        out["counterexample"] = r.counterexample
    if r.report:
        out["report"] = r.report
    return out


__all__ = [
    "SUITE_NAMES",
    "SuiteResult",
    "run_suite",
    "result_payload",
    "round_trip_rows",
    "conjugacy_check",
]
