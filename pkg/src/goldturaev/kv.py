"""Kashiwara-Vergne conditions: checks, a degree-by-degree solver, Duflo data.

A problem of degree ``N`` asks for F in TAut, truncated at ``N + 2``, with
KVI holding through degree ``N + 2`` and the KVII' residue vanishing
through degree ``N``; this is exactly what the twisted cobracket needs in
order to be known through degree ``N``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from gmpy2 import mpq

from .algebra import ONE, ZERO, Series, Signature, omega, qstr, xi
from .cyclic import CyclicSeries
from .errors import DecompositionAmbiguous, GenusNotZero, KvIFailed
from .framing import FramingData
from .lie import lie_basis
from .linalg import Echelon, min_norm_solution, solve_linear
from .loops import expected_center_basis
from .tangential import (
    TAutElement,
    TDerElement,
    c_q,
    j_q,
    p_element,
    r_element,
    taut_exp,
    tdiv,
)
from .cyclic import co_counit_first


@dataclass
class KvProblem:
    sig: Signature
    framing: FramingData
    degree: int

    def __post_init__(self):
        if self.framing.sig != self.sig:
            raise ValueError("framing does not match the signature")
        if self.degree < 1:
            raise ValueError("KV problems need degree >= 1")

    @property
    def truncation(self) -> int:
        return self.degree + 2

    @property
    def q(self) -> tuple:
        return self.framing.q_values

    def p(self) -> Series:
        return self.framing.p()

    def r(self) -> CyclicSeries:
        return r_element(self.sig, self.truncation)

    def omega(self) -> Series:
        return omega(self.sig)

    def xi(self) -> Series:
        return xi(self.sig, self.truncation)

    def center_basis(self, d: int) -> list:
        return expected_center_basis(self.sig, d)

    def to_json(self) -> dict:
        return {"signature": self.sig.to_json(), "framing": self.framing.to_json(), "degree": self.degree}

    @classmethod
    def from_json(cls, data) -> "KvProblem":
        sig = Signature.from_json(data["signature"])
        return cls(sig, FramingData.from_json(sig, data.get("framing", {})), int(data["degree"]))


@dataclass
class KvReport:
    status: str  # "Solved" | "Obstructed" | "CheckedOnly"
    problem: KvProblem
    F: TAutElement | None = None
    steps: list = field(default_factory=list)
    obstruction_degree: int | None = None
    certificate: CyclicSeries | Series | None = None
    certificate_kind: str | None = None
    duflo: dict | None = None
    checks: dict | None = None

    def to_json(self) -> dict:
        out = {"status": self.status, "problem": self.problem.to_json(), "steps": self.steps}
        if self.F is not None:
            out["solution"] = self.F.to_json()
        if self.status == "Obstructed":
            out["obstruction_degree"] = self.obstruction_degree
            out["certificate"] = {
                "kind": self.certificate_kind,
                "terms": _cert_terms(self.certificate, self.certificate_kind, self.problem.sig),
            }
        if self.duflo is not None:
            out["duflo"] = self.duflo
        if self.checks is not None:
            out["checks"] = self.checks
        return out


def _cert_terms(cert: dict, kind, sig) -> list:
    out = []
    for key, c in sorted(cert.items(), key=lambda kv: _key_sort(kv[0])):
        tag, word = key
        out.append({"equation": tag, "word": sig.word_names(word), "coeff": qstr(c)})
    return out


def _key_sort(key):
    tag, word = key
    return (tag, len(word), word)


# ----------------------------------------------------------------------------
# checks


def kvI_check(F: TAutElement, N: int | None = None) -> Series:
    """F(omega) - xi through degree N (zero iff KVI holds to N)."""
    N = F.N if N is None else min(N, F.N)
    sig = F.sig
    return (F.apply(omega(sig).with_valid(N)) - xi(sig, N)).truncate(N)


def kvII_phi(F: TAutElement, problem: KvProblem) -> CyclicSeries:
    """phi(F) = j_q(F^{-1}) + F^{-1}(r + |p|), known through degree F.N - 2."""
    M = F.N - 2
    Finv = F.inverse()
    value = j_q(Finv, problem.framing).truncate(M)
    if problem.sig.g:
        extra = r_element(problem.sig, M) + p_element(problem.framing, M)
        value = value + Finv.apply_cyclic(extra).truncate(M)
    return value


def center_residue(phi: CyclicSeries, sig: Signature, upto: int) -> CyclicSeries:
    """Residue of ``phi`` modulo the center, degree by degree through ``upto``."""
    out: dict = {}
    for d in range(upto + 1):
        comp = phi.component(d)
        if not comp:
            continue
        ech = Echelon()
        for Z in expected_center_basis(sig, d):
            ech.add(dict(Z.terms))
        out.update(ech.residual(dict(comp.terms)))
    return CyclicSeries(sig, out, upto, canonical=True)


def kvII_defect(F: TAutElement, problem: KvProblem, check_kvI: bool = True) -> CyclicSeries:
    """Residue of phi(F) modulo the center; zero iff KVII' holds."""
    upto = min(problem.degree, F.N - 2)
    if check_kvI and kvI_check(F, min(F.N, problem.truncation)):
        raise KvIFailed("KVI does not hold; KVII' is only meaningful for KVI solutions")
    return center_residue(kvII_phi(F, problem), problem.sig, upto)


# ----------------------------------------------------------------------------
# Duflo data


def duflo_extract(F: TAutElement, problem: KvProblem, strict: bool = False) -> dict:
    """Decompose j(F^{-1}) = |sum_j h_j(z_j) - h(sum_i z_i)| degree by degree.

    Returns coefficient lists (index k is the coefficient of s^k) plus the
    degrees where the decomposition is not unique; there the least-norm
    representative is reported.  With ``strict`` such degrees raise.
    """
    sig = problem.sig
    if sig.g != 0:
        raise GenusNotZero("Duflo extraction is a genus-0 statement")
    phi = kvII_phi(F, problem)
    top = min(problem.degree, F.N - 2)
    K = top // 2
    h = [ZERO] * (K + 1)
    hj = [[ZERO] * (K + 1) for _ in range(sig.n)]
    ambiguous = []
    residual_zero = True
    for k in range(1, K + 1):
        cols = [dict(CyclicSeries(sig, {(sig.z(j),) * k: ONE}).terms) for j in range(1, sig.n + 1)]
        z0 = Series(sig, {(sig.z(j),): ONE for j in range(1, sig.n + 1)})
        power = Series.unit(sig)
        for _ in range(k):
            power = power * z0
        cols.append({w: -c for w, c in CyclicSeries(sig, power.terms).terms.items()})
        rhs = dict(phi.component(2 * k).terms)
        sol, kernel = solve_linear(cols, rhs)
        if sol is None:
            residual_zero = False
            continue
        if kernel:
            if strict:
                raise DecompositionAmbiguous(f"decomposition at degree {2 * k} is not unique")
            ambiguous.append(2 * k)
            sol = min_norm_solution(cols, rhs)
        for j in range(sig.n):
            hj[j][k] = sol.get(j, ZERO)
        h[k] = sol.get(sig.n, ZERO)
    same_mod_linear = all(hj[j][k] == h[k] for j in range(sig.n) for k in range(2, K + 1))
    return {
        "h": h,
        "h_j": hj,
        "ambiguous_degrees": ambiguous,
        "residual_zero": residual_zero,
        "same_modulo_linear": same_mod_linear,
    }


def duflo_to_json(data: dict) -> dict:
    return {
        "h": [qstr(c) for c in data["h"]],
        "h_j": [[qstr(c) for c in row] for row in data["h_j"]],
        "ambiguous_degrees": data["ambiguous_degrees"],
        "non_unique": bool(data["ambiguous_degrees"]),
        "residual_zero": data["residual_zero"],
        "same_modulo_linear": data["same_modulo_linear"],
    }


# ----------------------------------------------------------------------------
# solver


def tder_basis(sig: Signature, d: int) -> list:
    """Basis of the homogeneous part of tder+ of shift ``d`` (Lyndon coordinates)."""
    out = []
    for a in range(2 * sig.g):
        for b in lie_basis(sig, d + 1):
            out.append(TDerElement(sig, {a: b}))
    for j in range(sig.n):
        for b in lie_basis(sig, d):
            tang = [Series.zero(sig)] * sig.n
            tang[j] = b
            out.append(TDerElement(sig, None, tang))
    return out


def _system_column(u: TDerElement, problem: KvProblem, d: int, with_kvI: bool) -> dict:
    col: dict = {}
    if with_kvI:
        for w, c in u.apply(omega(problem.sig)).component(d + 2).terms.items():
            col[("I", w)] = c
    lin = co_counit_first(tdiv(u)) - c_q(u, problem.framing)
    for w, c in lin.component(d).terms.items():
        col[("II", w)] = c
    return col


def build_system(problem: KvProblem, F: TAutElement, d: int, kvI_only: bool = False):
    """Columns, right-hand side and unknown labels of the degree-``d`` step."""
    sig = problem.sig
    M = F.N
    with_kvI = d + 2 <= M
    basis = tder_basis(sig, d)
    cols = [_system_column(u, problem, d, with_kvI) for u in basis]
    centre = expected_center_basis(sig, d)
    for Z in centre:
        cols.append({("II", w): c for w, c in Z.terms.items()})
    rhs: dict = {}
    if with_kvI:
        defect = kvI_check(F, d + 2).component(d + 2)
        for w, c in defect.terms.items():
            rhs[("I", w)] = -c
    if kvI_only:
        cols = [{k: c for k, c in col.items() if k[0] == "I"} for col in cols]
        return basis, centre, cols, rhs
    phi = kvII_phi(F, problem).component(d)
    for w, c in phi.terms.items():
        rhs[("II", w)] = c
    return basis, centre, cols, rhs


def audit_certificate(report: KvReport) -> bool:
    """Re-derive the obstructed system and confirm the certificate.

    The certificate ``c`` must satisfy: ``rhs - c`` lies in the image of the
    correction map and ``c`` itself does not (so rhs is unreachable).
    """
    if report.status != "Obstructed":
        return False
    problem, F, d = report.problem, report.F, report.obstruction_degree
    _, _, cols, rhs = build_system(problem, F, d)
    cert = report.certificate
    if not cert:
        return False
    diff = dict(rhs)
    for k, c in cert.items():
        diff[k] = diff.get(k, ZERO) - c
    diff = {k: c for k, c in diff.items() if c}
    ech = Echelon()
    for col in cols:
        ech.add(col)
    return ech.solve(diff) is not None and ech.solve(cert) is None


def kv_solve(problem: KvProblem, seed: int | None = None, kvI_only: bool = False) -> KvReport:
    """Degree-by-degree solver; F <- exp(u) o F with u homogeneous in tder+.

    ``seed`` adds a random combination of the step's kernel (a gauge
    choice).  With ``kvI_only`` the KVII' equations are dropped.
    """
    sig = problem.sig
    M = problem.truncation
    rng = random.Random(seed) if seed is not None else None
    F = TAutElement.identity(sig, M)
    steps = []
    for d in range(1, problem.degree + 1):
        basis, centre, cols, rhs = build_system(problem, F, d, kvI_only)
        ech = Echelon()
        for col in cols:
            ech.add(col)
        sol = ech.solve(rhs)
        step = {"degree": d, "unknowns": len(cols), "rank": ech.rank, "kernel": len(ech.kernel)}
        if sol is None:
            step["status"] = "obstructed"
            steps.append(step)
            return KvReport(
                "Obstructed", problem, F, steps, obstruction_degree=d,
                certificate=ech.residual(rhs), certificate_kind="residual",
            )
        if rng is not None and ech.kernel:
            for vec in ech.kernel:
                c = rng.randint(-2, 2)
                for i, v in vec.items():
                    sol[i] = sol.get(i, ZERO) + c * v
        u = TDerElement.zero(sig)
        for i, c in sol.items():
            if i < len(basis) and c:
                u = u + basis[i].scale(c)
        if not u.is_zero():
            F = taut_exp(u, M).compose(F)
        # full re-verification from scratch
        if kvI_check(F, d + 2):
            raise AssertionError(f"KVI re-check failed at degree {d + 2}")
        if not kvI_only and center_residue(kvII_phi(F, problem), sig, d):
            raise AssertionError(f"KVII' re-check failed at degree {d}")
        step["status"] = "solved"
        steps.append(step)
    report = KvReport("Solved", problem, F, steps)
    report.checks = verify_solution(F, problem, kvI_only=kvI_only)
    if sig.g == 0 and not kvI_only:
        report.duflo = duflo_to_json(duflo_extract(F, problem))
    return report


def verify_solution(F: TAutElement, problem: KvProblem, kvI_only: bool = False) -> dict:
    """Independent re-verification of both KV conditions."""
    kvI = kvI_check(F, problem.truncation)
    out = {"kvI_defect_zero": not kvI, "kvI_degree": problem.truncation}
    if not kvI_only:
        res = center_residue(kvII_phi(F, problem), problem.sig, problem.degree)
        out["kvII_residue_zero"] = not res
        out["kvII_degree"] = problem.degree
    tang = F.tangential_defect()
    out["tangential_constraint"] = all(not t for t in tang)
    return out


def check_solution(F: TAutElement, problem: KvProblem) -> KvReport:
    checks = verify_solution(F, problem)
    report = KvReport("CheckedOnly", problem, F, checks=checks)
    if problem.sig.g == 0 and checks.get("kvI_defect_zero") and checks.get("kvII_residue_zero"):
        report.duflo = duflo_to_json(duflo_extract(F, problem))
    return report


def perturb_kvI_only(F: TAutElement, problem: KvProblem, d: int = 1, scale=1) -> TAutElement:
    """Return F o exp(u) with u(omega) = 0 chosen so that KVII' breaks.

    F o exp(u) keeps KVI.  Shifts d, d+1, ... are scanned for the first
    kernel element of u -> u(omega) whose divergence correction is not central.
    """
    sig = problem.sig
    for shift in range(d, F.N - 1):
        basis = tder_basis(sig, shift)
        ech = Echelon()
        for u in basis:
            ech.add(dict(u.apply(omega(sig)).terms))
        for vec in ech.kernel:
            u = TDerElement.zero(sig)
            for i, c in vec.items():
                u = u + basis[i].scale(c)
            lin = co_counit_first(tdiv(u)) - c_q(u, problem.framing)
            if center_residue(lin, sig, shift):
                return F.compose(taut_exp(u.scale(mpq(scale)), F.N))
    raise ValueError("no KVI-preserving perturbation breaks KVII' below the truncation degree")


__all__ = [
    "KvProblem", "KvReport", "kvI_check", "kvII_phi", "kvII_defect", "center_residue",
    "duflo_extract", "kv_solve", "verify_solution", "check_solution", "audit_certificate",
    "perturb_kvI_only", "tder_basis", "build_system",
]
