"""Verification suites over (p, n, q) grids and their reports.

Every suite returns one record per case.  Records are sorted by case key,
carry a fixed anchor naming the statement they certify (or ``plumbing``),
and never include timings, so a config and seed determine the JSON bytes.
"""

from __future__ import annotations

import json
import random
import time
import traceback
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Callable, Iterator

from . import textformat
from .charts import (
    ChartTriple,
    build_kummer_cover,
    check_log_smooth_chart,
    is_prime,
    random_fs_sharp,
    random_strictness_instance,
    verify_strictness_criterion,
    verify_torsor_selfproduct,
)
from .cohomology import (
    CurveParams,
    basis_change,
    cech_h1_thickened,
    cech_torus_matrix,
    expected_h1_dim,
    fixed_classes,
    frobenius_operator,
    monomial_h1_basis,
    one_scalar,
    semilinear_kernel_dim,
    t_scalar,
    torus_action,
)
from .cone import DEFAULT_HILBERT_CAP
from .errors import ResourceCapError
from .gf import prime_power
from .hopf import DEFAULT_HOM_CAP, alpha, constant, gm, hom_group_schemes, mu
from .kummer import mu_p_decomposition_check, r1_sections, surjectivity_certificate
from .lattice import AbelianGroup
from .monoid import AffineMonoid, MonoidMap, monoid_isomorphic, pushout_fs, same_elements, saturate
from .picard import picard_p_torsion
from .truncated import GroupRingScalar

SCHEMA_ID = "lognori.report.v1"
SCHEMA_PATH = Path(__file__).with_name("schemas") / "report.v1.json"

STATUSES = ("pass", "fail", "unknown")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Caps:
    element_norm: int = 3  # coordinate bound for random generators
    hilbert_basis: int = DEFAULT_HILBERT_CAP
    degree_window: int = 0  # Cech window start; 0 means d - 1
    random_tests: int = 200
    hom_search: int = DEFAULT_HOM_CAP

    @classmethod
    def from_mapping(cls, data: dict) -> "Caps":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown caps: {', '.join(sorted(extra))}")
        for k, v in data.items():
            if not isinstance(v, int) or isinstance(v, bool):
                raise ConfigError(f"cap {k} must be an integer")
        return cls(**data)


@dataclass(frozen=True)
class SuiteConfig:
    primes: frozenset[int] = frozenset({2, 3})
    max_n: int = 2
    field_sizes: frozenset[int] | None = None  # None: {p, p^2} for each p
    caps: Caps = field(default_factory=Caps)
    seed: int = 0
    output: str = "text"
    unknown_fatal: bool = False

    def __post_init__(self):
        if not self.primes:
            raise ConfigError("prime set is empty")
        for p in self.primes:
            if not is_prime(p):
                raise ConfigError(f"{p} is not prime")
        if self.max_n < 0:
            raise ConfigError("max_n must be non-negative")
        if self.output not in ("text", "json"):
            raise ConfigError(f"unknown output mode {self.output!r}")
        for f in fields(Caps):
            v = getattr(self.caps, f.name)
            if v < 0 or (v == 0 and f.name != "degree_window"):
                raise ConfigError(f"cap {f.name} must be positive")
        if self.field_sizes is not None:
            if not self.field_sizes:
                raise ConfigError("field size set is empty")
            for q in self.field_sizes:
                try:
                    p, _ = prime_power(q)
                except ValueError:
                    raise ConfigError(f"{q} is not a prime power") from None
                if p not in self.primes:
                    raise ConfigError(f"field size {q} is not a power of a listed prime")

    def fields_for(self, p: int) -> list[int]:
        if self.field_sizes is None:
            return [p, p * p]
        return sorted(q for q in self.field_sizes if prime_power(q)[0] == p)

    def grid(self, n_min: int = 0) -> Iterator[CurveParams]:
        for p in sorted(self.primes):
            for n in range(n_min, self.max_n + 1):
                for q in self.fields_for(p):
                    yield CurveParams(p, n, q)

    def as_json(self) -> dict:
        return {
            "primes": sorted(self.primes),
            "max_n": self.max_n,
            "field_sizes": None if self.field_sizes is None else sorted(self.field_sizes),
            "caps": asdict(self.caps),
            "seed": self.seed,
        }


@dataclass
class CaseRecord:
    suite: str
    key: tuple
    paper_anchor: str
    inputs: dict
    outputs: dict
    status: str
    runtime: float = 0.0

    def as_json(self) -> dict:
        return {
            "suite": self.suite,
            "case": list(self.key),
            "paper_anchor": self.paper_anchor,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "status": self.status,
        }


@dataclass
class VerificationReport:
    config: SuiteConfig
    suite: str
    records: list[CaseRecord]

    def counts(self) -> dict[str, int]:
        return {s: sum(r.status == s for r in self.records) for s in STATUSES}

    @property
    def exit_code(self) -> int:
        c = self.counts()
        if c["fail"]:
            return 1
        if c["unknown"] and self.config.unknown_fatal:
            return 3
        return 0

    def as_json(self) -> dict:
        return {
            "schema": SCHEMA_ID,
            "suite": self.suite,
            "config": self.config.as_json(),
            "records": [r.as_json() for r in self.records],
            "summary": self.counts(),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_json(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = []
        for r in self.records:
            key = " ".join(f"{x}" for x in r.key)
            lines.append(f"[{r.status.upper():7}] {r.suite} {key}  ({r.paper_anchor}, {r.runtime:.2f}s)")
            if r.status != "pass":
                for k, v in sorted(r.outputs.items()):
                    lines.append(f"          {k}: {v}")
        c = self.counts()
        lines.append(f"{self.suite}: {c['pass']} pass, {c['fail']} fail, {c['unknown']} unknown")
        return "\n".join(lines) + "\n"


# A case is (key, anchor, inputs, thunk); the thunk returns (status, outputs).
Case = tuple[tuple, str, dict, Callable[[], tuple[str, dict]]]


def _run_case(suite: str, case: Case) -> CaseRecord:
    key, anchor, inputs, thunk = case
    t0 = time.perf_counter()
    try:
        status, outputs = thunk()
    except ResourceCapError as e:
        status, outputs = "unknown", {"resource": str(e)}
    except Exception as e:  # isolation: one broken case never stops its siblings
        status = "fail"
        outputs = {"error": f"{type(e).__name__}: {e}", "where": traceback.format_exc(limit=2).splitlines()[-1]}
    return CaseRecord(suite, key, anchor, inputs, outputs, status, time.perf_counter() - t0)


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def _seeded(cfg: SuiteConfig, *salt) -> random.Random:
    return random.Random(f"{cfg.seed}:" + ":".join(map(str, salt)))


# -- monoid-properties ----------------------------------------------------


def random_leg(rng: random.Random, q: AffineMonoid, bound: int = 2) -> MonoidMap:
    """A map from sharp ``q`` in Z^r into a saturated submonoid of Z^s."""
    r = q.ambient.dim
    s = rng.randint(1, 2)
    a = [[rng.randint(0, bound) for _ in range(r)] for _ in range(s)]
    for i in range(min(r, s)):
        a[i][i] += 1
    img = [tuple(sum(a[i][j] * g[j] for j in range(r)) for i in range(s)) for g in q.generators]
    extra = [tuple(rng.randint(0, bound) for _ in range(s)) for _ in range(rng.randint(0, 2))]
    target = saturate(AffineMonoid(AbelianGroup(s), tuple(v for v in img + extra if any(v))))
    return MonoidMap(q, target, tuple(tuple(row) for row in a))


def check_saturation_idempotent(rng: random.Random, bound: int) -> tuple[bool, str]:
    r = rng.randint(1, 3)
    gens = tuple(tuple(rng.randint(-bound, bound) for _ in range(r)) for _ in range(rng.randint(1, 4)))
    tors = rng.choice([(), (2,), (3,), (2, 4)])
    amb = AbelianGroup(r, tors)
    gens = tuple(g + tuple(rng.randrange(t) for t in tors) for g in gens)
    m = AffineMonoid(amb, gens)
    s1 = saturate(m)
    s2 = saturate(s1)
    ok = same_elements(s1, s2) and s1.is_saturated and all(s1.coords(g) is not None for g in m.generators)
    return ok, "" if ok else textformat.serialize(m)


def check_pushout_symmetry(rng: random.Random, bound: int) -> tuple[bool, str]:
    q = random_fs_sharp(rng, bound=bound)
    f, g = random_leg(rng, q), random_leg(rng, q)
    iso = monoid_isomorphic(pushout_fs(f, g), pushout_fs(g, f))
    return bool(iso), "" if iso else f"{textformat.serialize(f)}---\n{textformat.serialize(g)}"


def check_text_roundtrip(rng: random.Random, bound: int) -> tuple[bool, str]:
    r = rng.randint(0, 3)
    tors = rng.choice([(), (2,), (3, 6)])
    amb = AbelianGroup(r, tors)
    gens = tuple(tuple(rng.randint(-bound, bound) for _ in range(amb.dim)) for _ in range(rng.randint(0, 4)))
    m = AffineMonoid(amb, gens)
    text = textformat.serialize(m)
    again = textformat.parse(text)
    ok = again == m and textformat.serialize(again) == text
    return ok, "" if ok else text


PROPERTIES = {
    "saturation-idempotent": ("fs-saturation", check_saturation_idempotent),
    "pushout-symmetric": ("fs-pushout", check_pushout_symmetry),
    "text-roundtrip": ("plumbing", check_text_roundtrip),
}


def _property_case(cfg: SuiteConfig, name: str) -> Case:
    anchor, check = PROPERTIES[name]
    count, bound = cfg.caps.random_tests, cfg.caps.element_norm

    def run():
        rng = _seeded(cfg, "monoid-properties", name)
        failures = []
        for i in range(count):
            ok, witness = check(rng, bound)
            if not ok:
                failures.append({"index": i, "witness": witness})
        return _verdict(not failures), {"cases": count, "failures": len(failures), "first_failure": failures[0] if failures else None}

    return ((name,), anchor, {"cases": count, "element_norm": bound}, run)


def monoid_properties(cfg: SuiteConfig) -> list[Case]:
    return [_property_case(cfg, name) for name in PROPERTIES]


# -- chart-lemmas ---------------------------------------------------------


def _strictness_case(cfg: SuiteConfig) -> Case:
    count = cfg.caps.random_tests

    def run():
        rng = _seeded(cfg, "chart-lemmas", "strictness")
        fails, unknown = [], 0
        for i in range(count):
            inst = random_strictness_instance(rng)
            v = verify_strictness_criterion(inst.q1, inst.to_q2, inst.to_q3)
            if v.status == "fail":
                fails.append({"index": i, "witness": v.witness})
            elif v.status == "unknown":
                unknown += 1
        status = "fail" if fails else ("unknown" if unknown else "pass")
        return status, {"cases": count, "failures": len(fails), "unknown": unknown, "first_failure": fails[0] if fails else None}

    return (("strictness",), "strictness-after-kummer-base-change", {"cases": count}, run)


def _kummer_cover_case(cfg: SuiteConfig, p: int, n: int) -> Case:
    def run():
        n2 = AffineMonoid.free(2)
        chart = ChartTriple(AffineMonoid.free(1), n2, MonoidMap(AffineMonoid.free(1), n2, ((1,), (1,))), p)
        smooth = check_log_smooth_chart(chart)
        cover, verdict = build_kummer_cover(chart, n)
        cover_smooth = check_log_smooth_chart(cover)
        exponent = verdict.details.get("exponent")
        outputs = {
            "base_chart": smooth.status,
            "cover": verdict.status,
            "cover_log_smooth": cover_smooth.status,
            "exponent": exponent,
            "witness": verdict.witness or smooth.witness or cover_smooth.witness,
        }
        return _verdict(smooth.result and verdict.result and cover_smooth.result and exponent == n), outputs

    return (("kummer-cover", p, n), "kummer-cover-chart", {"p": p, "n": n, "chart": "N -> N^2 diagonal"}, run)


def chart_lemmas(cfg: SuiteConfig) -> list[Case]:
    cases = [_strictness_case(cfg)]
    for p in sorted(cfg.primes):
        for n in (2, 3, 4):
            if n % p:
                cases.append(_kummer_cover_case(cfg, p, n))
    return cases


# -- torsor-selfproduct ---------------------------------------------------


def torsor_selfproduct(cfg: SuiteConfig) -> list[Case]:
    cases = []
    for p in sorted(cfg.primes):
        for n in range(1, cfg.max_n + 1):

            def run(p=p, n=n):
                v = verify_torsor_selfproduct(p, n)
                return v.status, {"witness": v.witness, **v.details}

            cases.append((("torsor", p, n), "mu-torsor-chart-identity", {"p": p, "n": n, "chart": "N^2 times p^n"}, run))
    return cases


# -- cohomology-fixedpoints -----------------------------------------------


def _cohomology_case(cfg: SuiteConfig, params: CurveParams) -> Case:
    def run():
        window = cfg.caps.degree_window or None
        mono = monomial_h1_basis(params)
        cech = cech_h1_thickened(params, window=window)
        expected = expected_h1_dim(params.d)
        t, one = t_scalar(params), one_scalar(params)
        fixed = fixed_classes(params, [(t, one), (one, t)])
        frob = frobenius_operator(params, cech)
        ker_f = semilinear_kernel_dim(frob)
        ker_f1 = semilinear_kernel_dim(frob, 1)
        pic = picard_p_torsion(params, samples=cfg.caps.random_tests // 20 or 1, seed=cfg.seed)
        # Cech and monomial torus actions must agree after the weight basis change
        change = basis_change(params, cech)
        agree = True
        for a, b in ((t, one), (one, t)):
            diag = change.to_monomial_diag(cech_torus_matrix(params, a, b, cech))
            want = torus_action(params, a, b).entries
            zero = GroupRingScalar.scalar(params.field, params.d, 0)
            agree &= all(diag[i][j] == (want[i] if i == j else zero) for i in range(mono.dim) for j in range(mono.dim))
        outputs = {
            "dim_h1": mono.dim,
            "cech_dim": cech.rank,
            "expected_dim": expected,
            "cech_window": cech.window,
            "fixed_dim": len(fixed),
            "dim_ker_F": ker_f,
            "dim_ker_F_minus_1": ker_f1,
            "pic_p_torsion_factors": list(pic.p_torsion.torsion),
            "pic_kernel_factors": list(pic.kernel_factors),
            "torus_models_agree": agree,
        }
        ok = mono.dim == cech.rank == expected and agree and (params.d < 3 or not fixed)
        return _verdict(ok), outputs

    return (("h1", params.p, params.n, params.q), "thickened-line-h1-and-torus-fixed-points", {"p": params.p, "n": params.n, "q": params.q}, run)


def cohomology_fixedpoints(cfg: SuiteConfig) -> list[Case]:
    return [_cohomology_case(cfg, params) for params in cfg.grid(n_min=1)]


# -- kummer-surjectivity --------------------------------------------------


def kummer_surjectivity(cfg: SuiteConfig) -> list[Case]:
    cases = []
    for p in sorted(cfg.primes):
        for n in range(1, max(cfg.max_n, 1) + 1):

            def run(p=p, n=n):
                cert = surjectivity_certificate(p, n)
                bad = [f"({c.i},{c.j})" for c in cert.cases if not c.obstructs]
                return _verdict(cert.passes), {"classes": len(cert.cases), "obstructing": cert.obstructing, "non_obstructing": bad}

            cases.append((("surjectivity", p, n), "log-kummer-surjectivity", {"p": p, "n": n}, run))
    return cases


# -- hom-tables -----------------------------------------------------------

_EXPECTED_HOM = {  # target kind -> order as a function of p
    "mu": lambda p: p,
    "alpha": lambda p: 1,
    "Z/p": lambda p: 1,
    "Gm": lambda p: p,
}


def hom_tables(cfg: SuiteConfig) -> list[Case]:
    cases = []
    cap = cfg.caps.hom_search
    for p in sorted(cfg.primes):
        for q in cfg.fields_for(p):
            for tgt in (mu(p, 1, q), alpha(p, q), constant(p, q), gm(p, q)):

                def run(p=p, q=q, tgt=tgt):
                    h = hom_group_schemes(mu(p, 1, q), tgt, cap)
                    want = _EXPECTED_HOM[tgt.kind](p)
                    return _verdict(h.order == want), {"order": h.order, "expected": want, "invariants": list(h.invariants.torsion)}

                cases.append((("hom", p, q, tgt.kind), "hom-from-mu-p", {"source": f"mu_{p}", "target": str(tgt)}, run))
            for g, want in ((mu(p, 1, q), [p, p, p]), (alpha(p, q), [])):

                def run(g=g, want=want):
                    r = r1_sections(g, 3, cap)
                    got = list(r.group.torsion)
                    return _verdict(got == want and r.stable), {"sections": got, "expected": want, "stable": r.stable}

                cases.append((("r1", p, q, g.kind), "log-part-boundary-sections", {"group": str(g), "boundary_points": 3}, run))
    return cases


# -- decomposition --------------------------------------------------------


def decomposition(cfg: SuiteConfig) -> list[Case]:
    cases = []
    for params in cfg.grid(n_min=0):

        def run(params=params):
            rep = mu_p_decomposition_check(params)
            outputs = {"pic_p_rank": rep.pic_rank, "log_rank": rep.log_rank, "base_dim": rep.base_dim, "dimension": rep.dimension, **rep.details}
            return _verdict(rep.passes and rep.dimension == rep.pic_rank + 2), outputs

        cases.append((("decomposition", params.p, params.n, params.q), "mu-p-log-h1-decomposition", {"p": params.p, "n": params.n, "q": params.q}, run))
    return cases


SUITES: dict[str, Callable[[SuiteConfig], list[Case]]] = {
    "monoid-properties": monoid_properties,
    "chart-lemmas": chart_lemmas,
    "torsor-selfproduct": torsor_selfproduct,
    "cohomology-fixedpoints": cohomology_fixedpoints,
    "kummer-surjectivity": kummer_surjectivity,
    "hom-tables": hom_tables,
    "decomposition": decomposition,
}


def _sort_key(key: tuple) -> tuple:
    return tuple((0, x, "") if isinstance(x, int) else (1, 0, str(x)) for x in key)


def run_suite(cfg: SuiteConfig, name: str) -> VerificationReport:
    if name not in SUITES:
        raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    cases = sorted(SUITES[name](cfg), key=lambda c: _sort_key(c[0]))
    return VerificationReport(cfg, name, [_run_case(name, c) for c in cases])


def load_caps(path: str | Path, base: Caps | None = None) -> Caps:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read caps file: {e}") from None
    if not isinstance(data, dict):
        raise ConfigError("caps file must hold a JSON object")
    merged = {**asdict(base or Caps()), **data}
    return Caps.from_mapping(merged)


def with_caps(cfg: SuiteConfig, caps: Caps) -> SuiteConfig:
    return replace(cfg, caps=caps)
