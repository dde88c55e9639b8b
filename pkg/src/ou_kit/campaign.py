"""Seeded randomized verification campaigns.

Every trial is keyed by ``(check, ring, m, n, seed, trial)`` and draws its
randomness from a ``random.Random`` seeded with that key, so a campaign gives
the same report body at any degree of parallelism, and any failing trial can be
replayed on its own.
"""

from __future__ import annotations

import contextlib
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable

from . import vaserstein
from .decomp import (
    COLUMN,
    ROW,
    ElementaryWord,
    closed_form_preimage,
    decompose_elementary,
    decompose_word,
    factorize_eta,
    factorize_theta,
)
from .matrix import Mat, elementary
from .odd_quadratic import (
    L_MAX,
    L_MIN,
    HeisenbergElement,
    OddQuadraticSpace,
    elem_transvection_long,
    elem_transvection_short,
    equivalent_to_identity,
    esd_matrix,
    h_act,
    h_add,
    h_neg,
    h_trace,
    h_zero,
    is_antihermitian,
    param_contains,
    preserves_form,
    preserves_gram,
)
from .rings import Ring, involution_laws, ring_from_descriptor
from .sampling import (
    random_alternating,
    random_antihermitian_phi,
    random_elementary_letters,
    random_esd_args,
    random_invertible_phi,
    random_isotropic_for,
    random_param_element,
    random_trace_like,
    random_vector,
)
from .vaserstein import (
    L_of,
    L_star_of,
    assemble,
    eta,
    eta_explicit,
    is_symplectic,
    is_unitary,
    symplectic_pair,
    theta,
    theta_explicit,
)

CHECK_GROUPS: dict[str, tuple[str, ...]] = {
    "axioms": ("axioms/involution", "axioms/heisenberg"),
    "forms": ("forms/psi-recursion", "forms/psi-inverse", "forms/esd-isometry", "forms/transvections"),
    "theta-eta": ("theta-eta/display", "theta-eta/homomorphism"),
    "theorem32": ("theorem32/factorize", "theorem32/closed-form"),
    "decompose": ("decompose/elementary", "decompose/word"),
    "symplectic": ("symplectic/membership",),
    "diagnostics": ("diagnostics/L-unitarity", "diagnostics/closed-form-lambda", "diagnostics/equivalence"),
}

FAULTS = ("psi-sign",)
MAX_COUNTEREXAMPLES = 10
CHUNK = 100


class ConfigError(ValueError):
    pass


class CheckFailure(AssertionError):
    pass


class Skip(Exception):
    """The trial does not apply to this configuration."""


# ---------------------------------------------------------------------------
# configuration and report
# ---------------------------------------------------------------------------


@dataclass
class CampaignConfig:
    rings: list[str] = field(default_factory=lambda: ["int"])
    m_values: list[int] = field(default_factory=lambda: [1, 2, 3])
    n_values: list[int] = field(default_factory=lambda: [0, 1, 2, 3])
    trials: int = 100
    seed: int = 0
    jobs: int = 1
    checks: list[str] = field(default_factory=lambda: list(CHECK_GROUPS))
    fault: str | None = None

    def validate(self) -> None:
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if not self.m_values or min(self.m_values) < 1:
            raise ConfigError("m values must be >= 1")
        if not self.n_values or min(self.n_values) < 0:
            raise ConfigError("n values must be >= 0")
        for c in self.checks:
            if c not in CHECK_GROUPS:
                raise ConfigError(f"unknown check {c!r}; choose from {', '.join(CHECK_GROUPS)}")
        if self.fault is not None and self.fault not in FAULTS:
            raise ConfigError(f"unknown fault {self.fault!r}")
        for r in self.rings:
            ring_from_descriptor(r)

    def body(self) -> dict:
        return {
            "rings": list(self.rings),
            "m": list(self.m_values),
            "n": list(self.n_values),
            "trials": self.trials,
            "seed": self.seed,
            "checks": list(self.checks),
            "fault": self.fault,
        }


@dataclass
class CheckResult:
    name: str
    config: dict
    trials: int = 0
    skipped: int = 0
    failure_count: int = 0
    failures: list[dict] = field(default_factory=list)
    observations: dict[str, int] = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def body(self) -> dict:
        return {
            "name": self.name,
            "config": self.config,
            "trials": self.trials,
            "skipped": self.skipped,
            "failure_count": self.failure_count,
            "failures": self.failures,
            "observations": dict(sorted(self.observations.items())),
            "passed": self.passed,
        }


@dataclass
class Report:
    config: CampaignConfig
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failure_count(self) -> int:
        return sum(r.failure_count for r in self.results)

    def body(self) -> dict:
        return {
            "config": self.config.body(),
            "checks": [r.body() for r in self.results],
            "failure_count": self.failure_count,
            "passed": self.passed,
        }

    def to_dict(self) -> dict:
        return {
            "format_version": 1,
            "kind": "report",
            "body": self.body(),
            "timing": {f"{r.name} {_config_key(r.config)}": round(r.wall_time, 4) for r in self.results},
        }


def _config_key(config: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in config.items())


# ---------------------------------------------------------------------------
# trial context
# ---------------------------------------------------------------------------


class Context:
    """Lazily built per-configuration inputs shared by the trials of one task."""

    def __init__(self, ring: Ring, m: int, n: int, seed: int):
        self.ring, self.m, self.n, self.seed = ring, m, n, seed

    def _rng(self, tag: str) -> random.Random:
        return random.Random(f"{self.seed}|{tag}|{self.ring.descriptor}|{self.m}|{self.n}")

    @cached_property
    def data(self):
        phi, phi_inv = random_invertible_phi(self.ring, self.n, self._rng("phi"))
        return assemble(self.ring, self.m, self.n, phi, phi_inv)

    @cached_property
    def data_ah(self):
        pair = random_antihermitian_phi(self.ring, self.n, self._rng("phi-ah"))
        if pair is None:
            return None
        return assemble(self.ring, self.m, self.n, *pair)

    def psi_space(self, mode: str) -> OddQuadraticSpace:
        """``psi_tilde(m) (+) psi_tilde(n // 2)`` with ``m`` hyperbolic pairs."""
        gram = vaserstein.psi_tilde(self.ring, self.m + self.n // 2)
        return OddQuadraticSpace(self.ring, gram, mode, self.m)


def _fmt_vec(R: Ring, v) -> list[str]:
    return [R.format(x) for x in v]


def _expect(cond: bool, what: str) -> None:
    if not cond:
        raise CheckFailure(what)


# ---------------------------------------------------------------------------
# trials: each takes (ctx, rng, rec) and raises on failure
# ---------------------------------------------------------------------------


def t_involution(ctx: Context, rng, rec):
    R = ctx.ring
    a, b = R.random(rng), R.random(rng)
    rec.update(a=R.format(a), b=R.format(b))
    for name, arity, law in involution_laws(R):
        _expect(law(*(a, b)[:arity]), f"{name} fails")


def _heis_space(ctx: Context) -> OddQuadraticSpace:
    data = ctx.data_ah
    if data is not None:
        return OddQuadraticSpace(ctx.ring, data.Psi, L_MAX, ctx.m)
    return ctx.psi_space(L_MAX)


def t_heisenberg(ctx: Context, rng, rec):
    R = ctx.ring
    sp = _heis_space(ctx)
    z = [HeisenbergElement(random_vector(R, sp.dim, rng, 10), R.random(rng, 10)) for _ in range(3)]
    s = R.random(rng, 10)
    rec.update(elements=[[_fmt_vec(R, e.v), R.format(e.r)] for e in z], s=R.format(s))
    add = lambda x, y: h_add(sp, x, y)
    _expect(add(add(z[0], z[1]), z[2]) == add(z[0], add(z[1], z[2])), "associativity")
    zero = h_zero(sp)
    _expect(add(z[0], zero) == z[0] and add(zero, z[0]) == z[0], "identity")
    _expect(add(z[0], h_neg(sp, z[0])) == zero and add(h_neg(sp, z[0]), z[0]) == zero, "inverse")
    _expect(
        R.eq(h_trace(sp, add(z[0], z[1])), R.add(h_trace(sp, z[0]), h_trace(sp, z[1]))),
        "trace homomorphism",
    )
    _expect(
        h_act(sp, add(z[0], z[1]), s) == add(h_act(sp, z[0], s), h_act(sp, z[1], s)),
        "action distributes over +",
    )
    _expect(
        R.eq(h_trace(sp, h_act(sp, z[0], s)), R.prod(R.conj(s), R.lam_inv, h_trace(sp, z[0]), s)),
        "trace equivariance",
    )
    lmin = ctx.psi_space(L_MIN)
    lmax = ctx.psi_space(L_MAX)
    w = random_param_element(lmin, rng)
    rec.update(lmin_element=[_fmt_vec(R, w.v), R.format(w.r)])
    _expect(param_contains(lmin, w) and param_contains(lmax, w), "L_min inside L_max")


def _psi(ring: Ring, r: int):
    return vaserstein.psi_tilde(ring, r), vaserstein.psi_tilde_prime(ring, r)


def t_psi_recursion(ctx: Context, rng, rec):
    r = rng.randrange(7)
    rec.update(r=r)
    p, q = _psi(ctx.ring, r)
    _expect((p @ q).is_identity() and (q @ p).is_identity(), "psi_tilde(r) psi_tilde'(r) != I")


def t_psi_inverse(ctx: Context, rng, rec):
    R = ctx.ring
    phi, phi_inv = random_invertible_phi(R, ctx.n, rng)
    rec.update(phi=[_fmt_vec(R, r) for r in phi.rows])
    data = assemble(R, ctx.m, ctx.n, phi, phi_inv)
    _expect((data.Psi @ data.Psi_inv).is_identity(), "Psi Psi^-1 != I")
    _expect((data.Psi_inv @ data.Psi).is_identity(), "Psi^-1 Psi != I")
    _expect(data.Psi == vaserstein.perp(vaserstein.psi_tilde(R, ctx.m), phi), "Psi != psi_tilde(m) (+) phi")
    pair = random_antihermitian_phi(R, ctx.n, rng)
    if pair is not None:
        ah = assemble(R, ctx.m, ctx.n, *pair)
        _expect(is_antihermitian(ah.Psi), "Psi not anti-Hermitian for anti-Hermitian phi")


def t_esd(ctx: Context, rng, rec):
    R = ctx.ring
    for mode in (L_MAX, L_MIN):
        sp = ctx.psi_space(mode)
        v1, v2, r = random_esd_args(sp, rng)
        rec[mode] = {"v1": _fmt_vec(R, v1), "v2": _fmt_vec(R, v2), "r": R.format(r)}
        M = esd_matrix(sp, v1, v2, r)
        _expect(preserves_gram(sp.gram, M), f"ESD not an isometry ({mode}, Gram equation)")
        _expect(preserves_form(sp, M), f"ESD not an isometry ({mode}, basis pairs)")


def t_transvections(ctx: Context, rng, rec):
    R = ctx.ring
    sp = ctx.psi_space(L_MAX)
    m = ctx.m
    idx = [k for k in range(1, m + 1)] + [-k for k in range(1, m + 1)]
    if m >= 2:
        i = rng.choice(idx)
        j = rng.choice([k for k in idx if k not in (i, -i)])
        r, s = R.random(rng), R.random(rng)
        rec["short"] = {"i": i, "j": j, "r": R.format(r), "s": R.format(s)}
        T = elem_transvection_short(sp, i, j, r)
        _expect(preserves_gram(sp.gram, T), "T_(i,j)(r) not an isometry")
        _expect(T @ elem_transvection_short(sp, i, j, s) == elem_transvection_short(sp, i, j, R.add(r, s)), "T_(i,j) not additive")
    i = rng.choice(idx)
    v = random_isotropic_for(sp, i, rng)
    r = random_trace_like(R, rng)
    rec["long"] = {"i": i, "v": _fmt_vec(R, v), "r": R.format(r)}
    T = elem_transvection_long(sp, i, v, r)
    _expect(preserves_gram(sp.gram, T), "T_i(v, r) not an isometry")


def t_display(ctx: Context, rng, rec):
    data = ctx.data
    v = random_vector(ctx.ring, data.N, rng)
    rec.update(v=_fmt_vec(ctx.ring, v))
    _expect(theta(data, v) == theta_explicit(data, v), "theta != displayed theta")
    _expect(eta(data, v) == eta_explicit(data, v), "eta != displayed eta")


def t_homomorphism(ctx: Context, rng, rec):
    R = ctx.ring
    data = ctx.data
    v = random_vector(R, data.N, rng)
    w = random_vector(R, data.N, rng)
    rec.update(v=_fmt_vec(R, v), w=_fmt_vec(R, w))
    vw = tuple(R.add(x, y) for x, y in zip(v, w))
    neg = tuple(R.neg(x) for x in v)
    for name, f in (("theta", theta), ("eta", eta)):
        _expect(f(data, v) @ f(data, w) == f(data, vw), f"{name}(v) {name}(w) != {name}(v+w)")
        _expect((f(data, v) @ f(data, neg)).is_identity(), f"{name}(v)^-1 != {name}(-v)")
    N = data.N
    _expect((data.mu @ Mat.column(R, data.d)) == Mat.zeros(R, N, 1), "mu d^T != 0")
    _expect((Mat.row(R, data.c) @ data.rho) == Mat.zeros(R, 1, N), "c rho != 0")


def t_factorize(ctx: Context, rng, rec):
    data = ctx.data
    v = random_vector(ctx.ring, data.N, rng)
    rec.update(v=_fmt_vec(ctx.ring, v))
    _expect(factorize_theta(data, v).evaluate() == theta(data, v), "theta factorization")
    _expect(factorize_eta(data, v).evaluate() == eta(data, v), "eta factorization")


def _closed_form_matches(data, side, i, a) -> bool:
    v = closed_form_preimage(data, side, i, a)
    N = data.N
    if side == ROW:
        return theta(data, v) == elementary(data.ring, N, 1, i, a)
    return eta(data, v) == elementary(data.ring, N, i, 1, a)


def t_closed_form(ctx: Context, rng, rec):
    R = ctx.ring
    data = ctx.data
    m = ctx.m
    side = rng.choice((ROW, COLUMN))
    a = R.random(rng)
    ran = False
    if m >= 2:
        i = rng.randint(2, 2 * m - 1)
        rec["hyperbolic"] = {"side": side, "i": i, "a": R.format(a)}
        _expect(_closed_form_matches(data, side, i, a), "closed form on hyperbolic index")
        ran = True
    ah = ctx.data_ah
    if ah is not None and ctx.n and R.eq(R.lam, R.one):
        i = rng.randint(2 * m, ah.N)
        rec["phi_range"] = {"side": side, "i": i, "a": R.format(a)}
        _expect(_closed_form_matches(ah, side, i, a), "closed form on phi index")
        ran = True
    if not ran:
        raise Skip


def t_decompose(ctx: Context, rng, rec):
    R = ctx.ring
    data = ctx.data
    N = data.N
    if N < 2:
        raise Skip
    i, j = rng.sample(range(1, N + 1), 2)
    a = R.random(rng)
    rec.update(i=i, j=j, a=R.format(a))
    word = decompose_elementary(data, i, j, a)
    _expect(len(word) <= 4, "word longer than 4")
    _expect(word.evaluate() == elementary(R, N, i, j, a), "decomposition does not evaluate to E_(i,j)(a)")


def t_decompose_word(ctx: Context, rng, rec):
    R = ctx.ring
    data = ctx.data
    N = data.N
    if N < 2:
        raise Skip
    letters = random_elementary_letters(R, N, 10, rng, bound=20)
    rec.update(word=[[i, j, R.format(a)] for i, j, a in letters])
    word = ElementaryWord(R, N, tuple(letters))
    gw = decompose_word(data, word)
    _expect(len(gw) <= 4 * len(word), "generator word too long")
    _expect(gw.evaluate() == word.evaluate(), "decomposed word evaluates differently")


def t_symplectic(ctx: Context, rng, rec):
    R = ctx.ring
    size = ctx.n  # symplectic tasks reuse n as the matrix size
    phi, phi_inv = random_alternating(R, size, rng)
    v = random_vector(R, size - 1, rng)
    rec.update(size=size, phi=[_fmt_vec(R, r) for r in phi.rows], v=_fmt_vec(R, v))
    pair = symplectic_pair(phi, phi_inv, v)
    _expect(is_symplectic(pair.lower, phi), "M_lower not symplectic")
    _expect(is_symplectic(pair.upper, phi), "M_upper not symplectic")


def t_L_unitarity(ctx: Context, rng, rec):
    data = ctx.data_ah
    if data is None:
        raise Skip
    v = random_vector(ctx.ring, data.N, rng)
    rec.update(v=_fmt_vec(ctx.ring, v))
    return {
        "L_unitary": int(is_unitary(data, L_of(data, v))),
        "L_star_unitary": int(is_unitary(data, L_star_of(data, v))),
    }


def t_closed_form_lambda(ctx: Context, rng, rec):
    R = ctx.ring
    data = ctx.data_ah
    if data is None or not ctx.n:
        raise Skip
    side = rng.choice((ROW, COLUMN))
    i = rng.randint(2 * ctx.m, data.N)
    a = R.random(rng)
    rec.update(side=side, i=i, a=R.format(a))
    la = R.mul(R.lam, a)
    v = closed_form_preimage(data, side, i, a)
    got = theta(data, v) if side == ROW else eta(data, v)
    pos = (1, i) if side == ROW else (i, 1)
    return {
        "matches_E(a)": int(got == elementary(R, data.N, *pos, a)),
        "matches_E(lam*a)": int(got == elementary(R, data.N, *pos, la)),
    }


def t_equivalence(ctx: Context, rng, rec):
    sp = ctx.psi_space(L_MAX)
    v1, v2, r = random_esd_args(sp, rng)
    rec.update(v1=_fmt_vec(ctx.ring, v1), v2=_fmt_vec(ctx.ring, v2), r=ctx.ring.format(r))
    return {"equivalent_to_identity": int(equivalent_to_identity(sp, esd_matrix(sp, v1, v2, r)))}


# scope: "ring" runs once per ring, "config" per (ring, m, n), "symplectic" per (ring, size)
TRIALS: dict[str, tuple[str, Callable]] = {
    "axioms/involution": ("ring", t_involution),
    "axioms/heisenberg": ("config", t_heisenberg),
    "forms/psi-recursion": ("ring", t_psi_recursion),
    "forms/psi-inverse": ("config", t_psi_inverse),
    "forms/esd-isometry": ("config", t_esd),
    "forms/transvections": ("config", t_transvections),
    "theta-eta/display": ("config", t_display),
    "theta-eta/homomorphism": ("config", t_homomorphism),
    "theorem32/factorize": ("config", t_factorize),
    "theorem32/closed-form": ("config", t_closed_form),
    "decompose/elementary": ("config", t_decompose),
    "decompose/word": ("config", t_decompose_word),
    "symplectic/membership": ("symplectic", t_symplectic),
    "diagnostics/L-unitarity": ("config", t_L_unitarity),
    "diagnostics/closed-form-lambda": ("config", t_closed_form_lambda),
    "diagnostics/equivalence": ("config", t_equivalence),
}

SYMPLECTIC_SIZES = (4, 6)


# ---------------------------------------------------------------------------
# fault injection (negative controls)
# ---------------------------------------------------------------------------


@contextlib.contextmanager
def injected(fault: str | None):
    if fault is None:
        yield
        return
    if fault != "psi-sign":
        raise ConfigError(f"unknown fault {fault!r}")
    original = vaserstein.psi_tilde

    def mutated(ring, r):
        out = original(ring, r)
        grid = [list(row) for row in out.rows]
        for k in range(r):
            grid[2 * k + 1][2 * k] = ring.neg(grid[2 * k + 1][2 * k])
        return Mat(ring, grid, out.ncols)

    vaserstein.psi_tilde = mutated
    try:
        yield
    finally:
        vaserstein.psi_tilde = original


# ---------------------------------------------------------------------------
# running
# ---------------------------------------------------------------------------


def trial_rng(check: str, ring: str, m: int, n: int, seed: int, trial: int) -> random.Random:
    return random.Random(f"{seed}|{check}|{ring}|{m}|{n}|{trial}")


def run_trial(check: str, ring: str, m: int, n: int, seed: int, trial: int, fault: str | None = None,
              ctx: Context | None = None):
    """Run one trial; returns ``("pass" | "skip", observations)`` or ``("fail", record)``."""
    _, fn = TRIALS[check]
    rec: dict[str, Any] = {}
    with injected(fault):
        if ctx is None:
            ctx = Context(ring_from_descriptor(ring), m, n, seed)
        rng = trial_rng(check, ring, m, n, seed, trial)
        try:
            obs = fn(ctx, rng, rec)
        except Skip:
            return "skip", {}
        except Exception as exc:  # any exception is a failing trial
            detail = str(exc) or type(exc).__name__
            return "fail", {
                "check": check,
                "ring": ring,
                "m": m,
                "n": n,
                "seed": seed,
                "trial": trial,
                "fault": fault,
                "detail": f"{type(exc).__name__}: {detail}",
                "inputs": rec,
            }
    return "pass", obs or {}


def _run_task(task):
    check, ring, m, n, seed, start, stop, fault = task
    t0 = time.perf_counter()
    ctx = None
    with injected(fault):
        with contextlib.suppress(Exception):
            ctx = Context(ring_from_descriptor(ring), m, n, seed)
    passed = skipped = 0
    failures: list[dict] = []
    obs: dict[str, int] = {}
    for t in range(start, stop):
        status, payload = run_trial(check, ring, m, n, seed, t, fault, ctx)
        if status == "fail":
            failures.append(payload)
        elif status == "skip":
            skipped += 1
        else:
            passed += 1
            for k, v in payload.items():
                obs[k] = obs.get(k, 0) + v
    return passed, skipped, failures, obs, time.perf_counter() - t0


def _groups(config: CampaignConfig) -> list[tuple[str, str, int, int, dict]]:
    """All (check, ring, m, n, reported-config) combinations, in report order."""
    out = []
    for group in config.checks:
        for check in CHECK_GROUPS[group]:
            scope, _ = TRIALS[check]
            for ring in config.rings:
                if scope == "ring":
                    out.append((check, ring, 0, 0, {"ring": ring}))
                elif scope == "symplectic":
                    for size in SYMPLECTIC_SIZES:
                        out.append((check, ring, 0, size, {"ring": ring, "size": size}))
                else:
                    for m in config.m_values:
                        for n in config.n_values:
                            out.append((check, ring, m, n, {"ring": ring, "m": m, "n": n}))
    return out


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("OU_KIT_JOBS", "1")))
    except ValueError:
        return 1


def run_campaign(config: CampaignConfig) -> Report:
    config.validate()
    groups = _groups(config)
    tasks = []
    owners = []
    for gi, (check, ring, m, n, _) in enumerate(groups):
        for start in range(0, config.trials, CHUNK):
            tasks.append((check, ring, m, n, config.seed, start, min(start + CHUNK, config.trials), config.fault))
            owners.append(gi)
    if config.jobs == 1:
        outputs = list(map(_run_task, tasks))
    else:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            outputs = list(pool.map(_run_task, tasks, chunksize=1))

    results = [CheckResult(check, cfg) for check, _, _, _, cfg in groups]
    for gi, (passed, skipped, failures, obs, dt) in zip(owners, outputs):
        res = results[gi]
        res.trials += passed + skipped + len(failures)
        res.skipped += skipped
        res.failure_count += len(failures)
        room = MAX_COUNTEREXAMPLES - len(res.failures)
        res.failures.extend(failures[:max(room, 0)])
        for k, v in obs.items():
            res.observations[k] = res.observations.get(k, 0) + v
        res.wall_time += dt
    return Report(config, results)


def replay(record: dict) -> tuple[str, dict]:
    """Re-run a single counterexample record produced by :func:`run_campaign`."""
    try:
        check = record["check"]
        args = (record["ring"], int(record["m"]), int(record["n"]), int(record["seed"]), int(record["trial"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed counterexample: {exc}") from None
    if check not in TRIALS:
        raise ConfigError(f"unknown check {check!r}")
    return run_trial(check, *args, fault=record.get("fault"))
