"""Verification suites shared by the command line and the acceptance tests.

Every check is a function of a :class:`VerifyConfig` returning
``(ok, witness, counterexample)``.  A report sorts its records by check name,
so the merged output does not depend on execution order.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, fields
from fractions import Fraction
from importlib import resources
from math import comb, isqrt

from . import __version__
from . import collineation as col
from . import corresp, lattice, nilorbit, strata
from .lattice import MukaiVector
from .strata import RegionError


@dataclass
class VerifyConfig:
    g_max: int = 30
    rs_bound: int = 12
    o2_g_max: int = 100
    castelnuovo_g_max: int = 200
    lagrangian_g_max: int = 40
    springer_h_max: int = 8
    springer_samples: int = 200
    flag_h_max: int = 7
    collineation_seeds: int = 20
    collineation_rows: int = 5
    collineation_cols: int = 7
    mu_g_max: int = 30
    mu_n_max: int = 10
    seed: int = 42

    @classmethod
    def keys(cls):
        return [f.name for f in fields(cls)]

    def updated(self, **kw):
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        for k, v in kw.items():
            if v is not None:
                if k not in data:
                    raise KeyError(f"unknown setting {k!r}")
                data[k] = int(v)
        return VerifyConfig(**data)


@dataclass
class CheckRecord:
    name: str
    status: str
    witness: object = None
    counterexample: object = None
    elapsed: float = 0.0

    def to_dict(self, timestamps=True):
        out = {"name": self.name, "status": self.status, "witness": self.witness}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if timestamps:
            out["elapsed"] = round(self.elapsed, 6)
        return out


@dataclass
class VerificationReport:
    suite: str
    seed: int
    checks: list = field(default_factory=list)
    version: str = __version__

    @property
    def passed(self):
        return all(c.status == "pass" for c in self.checks)

    def to_dict(self, timestamps=True):
        return {
            "suite": self.suite,
            "seed": self.seed,
            "version": self.version,
            "passed": self.passed,
            "checks": [c.to_dict(timestamps) for c in sorted(self.checks, key=lambda c: c.name)],
        }


# grids

def h_grid(g_max, bound):
    """Every ``(g, v)`` with ``v = (r, 1, s)``, ``|r|, |s| <= bound`` and ``v`` in H.

    Negative-rank vectors are included through the sigma-tau convention.
    """
    for g in range(2, g_max + 1):
        for r in range(-bound, bound + 1):
            for s in range(-bound, bound + 1):
                v = MukaiVector(r, 1, s)
                if lattice.in_h(v, g):
                    yield g, lattice.normalize(v)


def _limit(items, n=5):
    return items[:n]


# lattice

G7_MATRIX = ((2, 12, 3), (1, 5, 1), (3, 12, 2))


def check_castelnuovo(cfg):
    base = strata.castelnuovo(6)
    bad = []
    checked = []
    for g in range(2, cfg.castelnuovo_g_max + 1):
        m = 4 * g + 1
        if isqrt(m) ** 2 != m:
            continue
        try:
            res = strata.castelnuovo(g)
        except AssertionError as exc:
            bad.append({"g": g, "error": str(exc)})
            continue
        checked.append(g)
        if res is None:
            bad.append({"g": g, "error": "no result"})
    ok = base == {"mu": 2, "count": 5} and strata.castelnuovo(2)["count"] == 1 and not bad
    return ok, {"g=6": base, "integral_g": checked}, (_limit(bad) or None) if not ok else None


def check_g7_isometry(cfg):
    m = lattice.LatticeIsometry(G7_MATRIX, 7)
    image = m(MukaiVector(0, 0, 1))
    crit = lattice.gamma_criterion(m, 7)
    ok = image == MukaiVector(3, 1, 2) and crit is False and lattice.is_isometry(G7_MATRIX, 7)
    wit = {"isometry": True, "image": list(image.as_tuple()), "criterion": crit, "det": m.det}
    return ok, wit, None if ok else wit


def check_o2_identity(cfg):
    bad = [g for g in range(2, cfg.o2_g_max + 1) if not lattice.verify_o2_identity(g)]
    return not bad, {"g_range": [2, cfg.o2_g_max]}, _limit(bad) or None


def check_generators(cfg):
    bad = []
    for g in range(2, cfg.g_max + 1):
        for name, f in lattice.GENERATORS.items():
            if not lattice.is_isometry(f(g), g):
                bad.append({"g": g, "generator": name})
    return not bad, {"g_range": [2, cfg.g_max], "generators": sorted(lattice.GENERATORS)}, _limit(bad) or None


# strata

def check_codim_formula(cfg):
    bad = []
    count = 0
    for g, v in h_grid(cfg.g_max, cfg.rs_bound):
        c = strata.build_collection(v, g)
        chi = abs(v.chi)
        top = lattice.dim_moduli(v, g)
        for t in range(0, c.mu + 1):
            count += 1
            codim = t * (chi + t)
            fib = strata.grassmannian_dim(t, chi + 2 * t)
            drop = top - lattice.dim_moduli(c.diagonal(t).base, g)
            # the drop equals the stratum codimension plus the fibre dimension
            if not (codim == fib == c.entry(0, t).codim and drop - codim == fib):
                bad.append({"g": g, "v": list(v.as_tuple()), "t": t, "codim": codim, "fiber_dim": fib, "drop": drop})
        for viol in strata.verify_conditions(c):
            bad.append({"g": g, "v": list(v.as_tuple()), "violation": viol.to_dict()})
    return not bad, {"strata_checked": count}, _limit(bad) or None


def check_canonical_ledger(cfg):
    bad = []
    rows = 0
    for g, v in h_grid(cfg.g_max, cfg.rs_bound):
        c = strata.build_collection(v, g)
        for row in range(c.mu + 1):
            rows += 1
            if not strata.canonical_class_ledger(c, row)["final_trivial"]:
                bad.append({"g": g, "v": list(v.as_tuple()), "row": row})
    return not bad, {"rows_checked": rows}, _limit(bad) or None


def check_dual_collections(cfg):
    bad = []
    for g, v in h_grid(cfg.g_max, cfg.rs_bound):
        c = strata.build_collection(v, g)
        for refl in ("sigma", "tau"):
            try:
                strata.dual_collection(c, refl)
            except (AssertionError, RegionError) as exc:
                bad.append({"g": g, "v": list(v.as_tuple()), "reflection": refl, "error": str(exc)})
    return not bad, {"reflections": ["sigma", "tau"]}, _limit(bad) or None


def check_index_shift(cfg):
    bad = []
    count = 0
    for g, v in h_grid(cfg.g_max, cfg.rs_bound):
        if v.chi < 0:
            continue
        m = strata.mu(v, g)
        for k in range(1, m + 1):
            for t in range(1, k + 1):
                count += 1
                if not strata.index_shift_check(v, t, k, g):
                    bad.append({"g": g, "v": list(v.as_tuple()), "t": t, "k": k})
    return not bad, {"cases": count}, _limit(bad) or None


def load_mu_fixture():
    text = resources.files("mukaidual").joinpath("data/mu_closed_form_exceptions.json").read_text()
    return json.loads(text)


def check_mu_discrepancy(cfg):
    scan = strata.mu(MukaiVector(0, 1, 2), 6)
    closed = strata.mu_jacobian_closed_form(2, 6)
    fixture = load_mu_fixture()
    current = strata.mu_closed_form_exceptions(cfg.mu_g_max, cfg.mu_n_max)
    expected = [e for e in fixture["exceptions"] if e["g"] <= cfg.mu_g_max and e["n"] <= cfg.mu_n_max]
    ok = scan == 1 and closed == 2 and current == expected
    wit = {"scan_mu(0,1,2;g=6)": scan, "closed_form": str(closed), "exceptions": len(current)}
    cex = None if ok else {"scan": scan, "closed": str(closed), "diff": _limit([e for e in current if e not in expected])}
    return ok, wit, cex


# nilorbit

def springer_pairs(h_max):
    return [(h, t) for h in range(2, h_max + 1) for t in range(1, h // 2 + 1)]


def check_springer(cfg):
    failures = []
    total = 0
    trips = 0
    for h, t in springer_pairs(cfg.springer_h_max):
        stats = nilorbit.springer_campaign(h, t, cfg.springer_samples, cfg.seed)
        total += stats.samples
        trips += stats.round_trips
        for f in stats.failures:
            failures.append({"h": h, "t": t, **f})
    wit = {"pairs": len(springer_pairs(cfg.springer_h_max)), "samples": total, "round_trips": trips}
    return not failures, wit, _limit(failures) or None


def check_flag_resolutions(cfg):
    bad = []
    for h in range(1, cfg.flag_h_max + 1):
        bad.extend(nilorbit.verify_flag_resolution_dims(h))
    return not bad, {"h_range": [1, cfg.flag_h_max]}, _limit(bad) or None


# collineation

def collineation_shapes(rows, cols):
    return [(r1, r0) for r1 in range(1, rows + 1) for r0 in range(1, cols + 1)]


def collineation_sample(rng, r1, r0):
    """One randomized round; returns the failed rule names."""
    bad = []
    rho1 = col.random_degenerate(rng, r1, r0)
    chain = col.greedy_complete(rho1, rng)
    if not col.validate(chain):
        bad.append("validity")
    if len(chain) > min(r0, r1) + 1:
        bad.append("chain length")
    tr = col.transpose_chain(chain)
    if not col.validate(tr):
        bad.append("transpose validity")
    if col.transpose_chain(tr) != chain:
        bad.append("transpose involution")
    if col.stratum_index(rho1) != col.stratum_index(rho1.T):
        bad.append("stratum index symmetry")
    if not col.ker_coker_duality(rho1):
        bad.append("ker/coker duality")
    p = rng.randint(1, 3)
    fam = col.MatrixFamily(
        col.random_degenerate(rng, r1, r0), tuple(col.random_int_matrix(rng, r1, r0) for _ in range(p))
    )
    x0 = [0] * p
    if not col.petri_dual_agreement(fam, x0):
        bad.append("petri dual agreement")
    xi = [rng.randint(-2, 2) for _ in range(p)]
    step = Fraction(rng.choice([1, -1]) * rng.randint(1, 3), rng.randint(1, 5))
    if col.finite_difference(fam, x0, xi, step) != fam.derivative(xi):
        bad.append("finite difference")
    return bad


def check_collineation(cfg):
    bad = []
    count = 0
    for seed in range(cfg.seed, cfg.seed + cfg.collineation_seeds):
        for r1, r0 in collineation_shapes(cfg.collineation_rows, cfg.collineation_cols):
            rng = nilorbit.sample_rng(seed, "collineation", r1, r0)
            count += 1
            rules = collineation_sample(rng, r1, r0)
            if rules:
                bad.append({"seed": seed, "shape": [r1, r0], "rules": rules})
    return not bad, {"samples": count}, _limit(bad) or None


def check_petri_normal_forms(cfg):
    bad = []
    count = 0
    for r0 in range(0, 6):
        for r1 in range(0, r0 + 1):
            for t in range(0, r1 + 1):
                fam = col.MatrixFamily.universal(r1, r0, col.normal_form(r1, r0, t))
                rk = col.petri_form(fam, [0] * fam.p, t).rank()
                count += 1
                if rk != col.expected_codim(fam.p, r0, r1, t):
                    bad.append({"r0": r0, "r1": r1, "t": t, "rank": rk})
    return not bad, {"normal_forms": count}, _limit(bad) or None


def check_tangent_cone(cfg):
    fam = col.MatrixFamily.universal(2, 2)
    eqs = col.tangent_cone_equations(fam, [0, 0, 0, 0], 1)
    quadric = {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1}
    ok = len(eqs) == 1 and eqs[0] in (quadric, {e: -c for e, c in quadric.items()})
    ok = ok and col.expected_codim(4, 2, 2, 1) == 1
    wit = {"equations": [col.poly_str(e) for e in eqs], "codim": col.expected_codim(4, 2, 2, 1)}
    return ok, wit, None if ok else wit


# corresp

def check_sigma_g4(cfg):
    res = corresp.sigma_g4_check()
    chern = corresp.top_chern_cotangent_projective(3)
    sols = corresp.relation_solutions(res["delta1_eigen"])
    ok = res == {"delta1_eigen": -4, "graph_eigen": 3, "relation": True} and chern == -4 and 3 in sols
    wit = {**res, "chern_oracle": chern, "relation_solutions": sols, "key_formula_eigen": corresp.graph_eigen_projective(3)}
    return ok, wit, None if ok else wit


def check_lagrangian(cfg):
    bad = []
    for g in range(2, cfg.lagrangian_g_max + 1):
        try:
            val = corresp.lagrangian_self_intersection(g)
        except AssertionError as exc:
            bad.append({"g": g, "error": str(exc)})
            continue
        if val != (-1) ** g * corresp.sym_euler(g, g) or val != comb(2 * g - 2, g):
            bad.append({"g": g})
        if corresp.jacobian_self_intersection(g) != 0:
            bad.append({"g": g, "jacobian": corresp.jacobian_self_intersection(g)})
    return not bad, {"g_range": [2, cfg.lagrangian_g_max]}, _limit(bad) or None


def check_delta_audit(cfg):
    bad = []
    count = 0
    for g, v in h_grid(cfg.g_max, cfg.rs_bound):
        count += 1
        fails = corresp.delta_dimension_audit(v, g)
        if fails:
            bad.append({"g": g, "v": list(v.as_tuple()), "t": fails})
    return not bad, {"vectors": count}, _limit(bad) or None


def check_tau_selfdual(cfg):
    models = [[[-2]], [[-2, 1], [1, 0]], [[-2, 0, 1], [0, 2, 0], [1, 0, -4]]]
    results = [corresp.tau_selfdual_check(m) for m in models]
    try:
        corresp.tau_selfdual_check([[-4]])
        rejected = False
    except corresp.PreconditionError:
        rejected = True
    ok = all(results) and rejected
    return ok, {"models": len(models), "rejects_theta2_-4": rejected}, None if ok else {"results": results}


SUITES = {
    "lattice": {
        "lattice.castelnuovo": check_castelnuovo,
        "lattice.g7_isometry": check_g7_isometry,
        "lattice.o2_identity": check_o2_identity,
        "lattice.generators": check_generators,
    },
    "strata": {
        "strata.codim_formula": check_codim_formula,
        "strata.canonical_ledger": check_canonical_ledger,
        "strata.dual_collections": check_dual_collections,
        "strata.index_shift": check_index_shift,
        "strata.mu_discrepancy": check_mu_discrepancy,
    },
    "nilorbit": {
        "nilorbit.springer": check_springer,
        "nilorbit.flag_resolutions": check_flag_resolutions,
    },
    "collineation": {
        "collineation.random_chains": check_collineation,
        "collineation.petri_normal_forms": check_petri_normal_forms,
        "collineation.tangent_cone": check_tangent_cone,
    },
    "corresp": {
        "corresp.sigma_g4": check_sigma_g4,
        "corresp.lagrangian": check_lagrangian,
        "corresp.delta_audit": check_delta_audit,
        "corresp.tau_selfdual": check_tau_selfdual,
    },
}


def run_check(name, func, cfg):
    t0 = time.perf_counter()
    try:
        ok, witness, cex = func(cfg)
    except Exception as exc:  # a crash is a failed check, reported with its message
        ok, witness, cex = False, None, {"exception": f"{type(exc).__name__}: {exc}"}
    elapsed = time.perf_counter() - t0
    if ok:
        cex = None
    elif cex is None:
        cex = {"detail": "check returned false"}
    return CheckRecord(name, "pass" if ok else "fail", witness, cex, elapsed)


def run_suite(suite, cfg=None):
    cfg = cfg or VerifyConfig()
    if suite == "all":
        names = [n for s in SUITES.values() for n in s.items()]
    elif suite in SUITES:
        names = list(SUITES[suite].items())
    else:
        raise KeyError(f"unknown suite {suite!r}")
    report = VerificationReport(suite, cfg.seed)
    for name, func in names:
        report.checks.append(run_check(name, func, cfg))
    report.checks.sort(key=lambda c: c.name)
    return report
