"""Command-line front end: ``gt <subcommand> ...``.

Exit status 0 on success, 1 on a domain error, 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import __version__
from .algebra import Series, Signature, qstr
from .cyclic import CyclicSeries, CyclicTensor, delta_tilde
from .errors import GTError
from .framing import FramingData


class UsageError(Exception):
    pass


# ----------------------------------------------------------------------------
# helpers


def _signature(args) -> Signature:
    try:
        return Signature(args.g, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _degree(args) -> int:
    d = args.degree
    cap = os.environ.get("GT_MAX_DEGREE")
    if d < 0:
        raise UsageError("--degree must be non-negative")
    if cap is not None and d > int(cap):
        raise UsageError(f"--degree {d} exceeds GT_MAX_DEGREE={cap}")
    return d


def _load_json(text: str):
    if os.path.exists(text):
        with open(text) as fh:
            return json.load(fh)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"not a file or JSON document: {text!r}") from exc


def _framing(args, sig) -> FramingData:
    if not getattr(args, "framing", None):
        return FramingData.adapted(sig)
    try:
        return FramingData.from_json(sig, _load_json(args.framing))
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"bad framing: {exc}") from exc


def _cyclic(sig, text, N) -> CyclicSeries:
    try:
        P = CyclicSeries.parse(sig, text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return P.truncate(N) if N is not None else P


def _series(sig, text) -> Series:
    try:
        return Series.parse(sig, text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _tder(args, sig):
    from .tangential import TDerElement

    if getattr(args, "tder", None):
        return TDerElement.from_json(_load_json(args.tder), sig)
    images = {}
    for spec in args.image or []:
        name, _, expr = spec.partition("=")
        try:
            letter = sig.parse_letter(name.strip())
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if sig.is_z(letter):
            raise UsageError("z images are determined by the tangential components")
        images[letter] = _series(sig, expr)
    tang = [Series.zero(sig)] * sig.n
    for spec in args.tangential or []:
        idx, _, expr = spec.partition("=")
        try:
            j = int(idx)
        except ValueError as exc:
            raise UsageError(f"bad tangential index {idx!r}") from exc
        if not 1 <= j <= sig.n:
            raise UsageError(f"tangential index {j} out of range")
        tang[j - 1] = _series(sig, expr)
    return TDerElement(sig, images, tang)


def _taut_from_file(path, sig=None):
    from .tangential import TAutElement

    data = _load_json(path)
    if "solution" in data:
        data = data["solution"]
    return TAutElement.from_json(data, sig)


def _emit(args, payload: dict, text: str):
    if args.format == "text":
        print(text)
    else:
        print(json.dumps(payload, indent=2, sort_keys=False))


def _value_json(value):
    return value.to_json()


# ----------------------------------------------------------------------------
# subcommands


def cmd_bracket(args):
    from .loops import goldman_bracket_gr

    sig = _signature(args)
    N = _degree(args)
    P, Q = _cyclic(sig, args.P, N + 2), _cyclic(sig, args.Q, N + 2)
    out = goldman_bracket_gr(P, Q).truncate(N)
    _emit(args, _value_json(out), out.pretty())


def cmd_cobracket(args):
    from .loops import turaev_cobracket_gr

    sig = _signature(args)
    N = _degree(args)
    out = turaev_cobracket_gr(_cyclic(sig, args.P, N + 2), _framing(args, sig)).truncate(N)
    _emit(args, _value_json(out), out.pretty())


def cmd_es(args):
    from .loops import es_part

    sig = _signature(args)
    N = _degree(args)
    out = es_part(_cyclic(sig, args.P, N + 2), _framing(args, sig)).truncate(N)
    _emit(args, _value_json(out), out.pretty())


def cmd_sigma(args):
    from .loops import sigma_hat_gr

    sig = _signature(args)
    N = _degree(args)
    u = sigma_hat_gr(_cyclic(sig, args.P, N + 2))
    _emit(args, u.to_json(), repr(u))


def cmd_axioms(args):
    from .loops import (
        cocycle_defect,
        cojacobi_defect,
        compatibility_defect,
        cyclic_basis,
        involutivity_defect,
        jacobi_defect,
        random_cyclic,
    )

    sig = _signature(args)
    N = _degree(args)
    f = _framing(args, sig)
    basis = [CyclicSeries(sig, {w: 1}, canonical=True) for d in range(N + 1) for w in cyclic_basis(sig, d)]
    counts = {"jacobi": 0, "cojacobi": 0, "compatibility": 0, "cocycle": 0, "involutivity": 0}
    checked = {k: 0 for k in counts}
    for P in basis:
        checked["cojacobi"] += 1
        counts["cojacobi"] += bool(cojacobi_defect(P, f))
        checked["involutivity"] += 1
        counts["involutivity"] += bool(involutivity_defect(P, f))
    small = [P for P in basis if P.low_degree() <= max(N // 2, 1) + 1]
    for i, P in enumerate(small):
        for Q in small[i:]:
            checked["compatibility"] += 1
            counts["compatibility"] += bool(compatibility_defect(P, Q))
            checked["cocycle"] += 1
            counts["cocycle"] += bool(cocycle_defect(P, Q, f))
    rng = random.Random(args.seed)
    for _ in range(args.random):
        P, Q, R = (random_cyclic(sig, rng.randint(0, N), rng) for _ in range(3))
        checked["jacobi"] += 1
        counts["jacobi"] += bool(jacobi_defect(P, Q, R))
    payload = {
        "signature": sig.to_json(),
        "framing": f.to_json(),
        "degree": N,
        "checked": checked,
        "nonzero_defects": counts,
        "all_zero": not any(counts.values()),
    }
    lines = [f"{k}: {checked[k]} checked, {counts[k]} nonzero" for k in counts]
    lines.append("all defects zero" if payload["all_zero"] else "NONZERO DEFECTS FOUND")
    _emit(args, payload, "\n".join(lines))


def cmd_center(args):
    from .loops import center_basis, center_matches_expected

    sig = _signature(args)
    N = _degree(args)
    degrees = []
    for d in range(N + 1):
        basis = center_basis(sig, d)
        degrees.append(
            {
                "degree": d,
                "dimension": len(basis),
                "matches_expected": center_matches_expected(sig, d),
                "basis": [P.to_json()["terms"] for P in basis],
            }
        )
    payload = {"signature": sig.to_json(), "degrees": degrees}
    text = "\n".join(f"degree {e['degree']}: dim {e['dimension']}, expected span {'yes' if e['matches_expected'] else 'NO'}" for e in degrees)
    _emit(args, payload, text)


def cmd_div(args):
    from .tangential import div

    sig = _signature(args)
    out = div(_tder(args, sig))
    _emit(args, _value_json(out), out.pretty())


def cmd_tdiv(args):
    from .tangential import tdiv

    sig = _signature(args)
    out = tdiv(_tder(args, sig))
    _emit(args, _value_json(out), out.pretty())


def cmd_gdiv(args):
    from .tangential import gdiv_f

    sig = _signature(args)
    N = _degree(args)
    out = gdiv_f(_tder(args, sig), _framing(args, sig), N)
    _emit(args, _value_json(out), out.pretty())


def cmd_jcocycle(args):
    from .tangential import C_q, J_cocycle, j_cocycle, taut_exp

    sig = _signature(args)
    N = _degree(args)
    f = _framing(args, sig)
    if args.kv_solution:
        F = _taut_from_file(args.kv_solution, sig)
    else:
        F = taut_exp(_tder(args, sig), N + 2)
    if args.inverse:
        F = F.inverse()
    J = J_cocycle(F)
    j = j_cocycle(F)
    cq = C_q(F, f)
    payload = {"J": J.to_json(), "j": j.to_json(), "C_q": cq.to_json(), "j_q": (j - cq).to_json()}
    text = f"J = {J.pretty()}\nj = {j.pretty()}\nC_q = {cq.pretty()}\nj_q = {(j - cq).pretty()}"
    _emit(args, payload, text)


def _word(sig, text):
    from .expansions import FreeGroupWord

    try:
        return FreeGroupWord.parse(sig, text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _group_ring(sig, text):
    """Parse ``"a1 c1 - a1 - c1 + 1"`` (optional rational coefficients)."""
    import re

    from .expansions import FreeGroupWord, GroupRingElement

    out = GroupRingElement(sig)
    for sign, body in re.findall(r"([+-]?)\s*([^+-]+)", text):
        body = body.strip()
        m = re.match(r"^(\d+(?:/\d+)?)\s*\*?\s*(.*)$", body)
        coeff, word = (m.group(1), m.group(2)) if m else ("1", body)
        c = -1 if sign == "-" else 1
        from gmpy2 import mpq

        w = FreeGroupWord.identity(sig) if word.strip() in ("", "1") else _word(sig, word)
        out = out + GroupRingElement(sig, {w: mpq(coeff) * c})
    return out


def _expansion(args, sig, N):
    from .expansions import Expansion

    if getattr(args, "kv_solution", None):
        return Expansion(_taut_from_file(args.kv_solution, sig))
    return Expansion.exponential(sig, N)


def cmd_expansion(args):
    from .expansions import expansion_eval, is_special, weight

    sig = _signature(args)
    N = _degree(args)
    if args.action == "eval":
        E = _expansion(args, sig, N)
        out = expansion_eval(E, _group_ring(sig, args.element), N)
        _emit(args, _value_json(out), out.pretty())
    elif args.action == "weight":
        w = weight(_group_ring(sig, args.element))
        _emit(args, {"weight": w}, str(w))
    else:
        E = _expansion(args, sig, N)
        defect = E.kvI_defect(N)
        special = is_special(E, N)
        _emit(args, {"special": special, "kvI_defect": defect.to_json()}, f"special: {special}")


def cmd_loop(args):
    from .expansions import Expansion, loop_bracket, loop_cobracket, loop_log

    sig = _signature(args)
    N = _degree(args)
    f = _framing(args, sig)
    if args.action == "log":
        E = Expansion(_taut_from_file(args.kv_solution, sig)) if args.kv_solution else None
        out = loop_log(_word(sig, args.words[0]), E, N)
    else:
        if not args.kv_solution:
            raise UsageError(f"loop {args.action} needs --kv-solution")
        F = _taut_from_file(args.kv_solution, sig)
        if args.action == "bracket":
            if len(args.words) != 2:
                raise UsageError("loop bracket takes two words")
            out = loop_bracket(_word(sig, args.words[0]), _word(sig, args.words[1]), Expansion(F), N)
        else:
            out = loop_cobracket(_word(sig, args.words[0]), F, f, N)
    _emit(args, _value_json(out), out.pretty())


def cmd_kv(args):
    from .kv import KvProblem, audit_certificate, check_solution, kv_solve

    if args.action == "solve":
        sig = _signature(args)
        N = _degree(args)
        if N < 1:
            raise UsageError("kv solve needs --degree >= 1")
        problem = KvProblem(sig, _framing(args, sig), N)
        report = kv_solve(problem, seed=args.seed, kvI_only=args.kvI_only)
        payload = report.to_json()
        if report.status == "Obstructed":
            payload["certificate"]["audited"] = audit_certificate(report)
    else:
        if not args.solution:
            raise UsageError("kv check needs --solution")
        data = _load_json(args.solution)
        if "problem" not in data:
            raise UsageError("solution file lacks the problem description")
        problem = KvProblem.from_json(data["problem"])
        F = _taut_from_file(args.solution, problem.sig)
        report = check_solution(F, problem)
        payload = report.to_json()
        payload.pop("solution", None)
    text_lines = [f"status: {payload['status']}"]
    for k, v in (payload.get("checks") or {}).items():
        text_lines.append(f"{k}: {v}")
    if payload.get("obstruction_degree") is not None:
        text_lines.append(f"obstructed at degree {payload['obstruction_degree']}")
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    _emit(args, payload, "\n".join(text_lines))


# ----------------------------------------------------------------------------
# parser


def _common(p, degree=True, framing=False):
    p.add_argument("--g", type=int, required=True, help="genus")
    p.add_argument("--n", type=int, required=True, help="number of inner boundary components")
    if degree:
        p.add_argument("--degree", type=int, default=6, help="truncation degree of the output")
    if framing:
        p.add_argument("--framing", help="framing JSON (file or inline); adapted framing if omitted")
    p.add_argument("--format", choices=("json", "text"), default="json")


def _tder_args(p):
    p.add_argument("--tder", help="tangential derivation JSON (file or inline)")
    p.add_argument("--image", action="append", metavar="LETTER=EXPR", help="image of x_i or y_i")
    p.add_argument("--tangential", action="append", metavar="J=EXPR", help="tangential component u_j")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gt", description="Graded Goldman-Turaev and Kashiwara-Vergne engine")
    parser.add_argument("--version", action="version", version=f"gt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bracket", help="graded Goldman bracket of two cyclic series")
    _common(p)
    p.add_argument("P")
    p.add_argument("Q")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("cobracket", help="graded framed Turaev cobracket")
    _common(p, framing=True)
    p.add_argument("P")
    p.set_defaults(func=cmd_cobracket)

    p = sub.add_parser("es", help="1-part of the framed cobracket")
    _common(p, framing=True)
    p.add_argument("P")
    p.set_defaults(func=cmd_es)

    p = sub.add_parser("sigma", help="the tangential derivation sigma_hat(P)")
    _common(p)
    p.add_argument("P")
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("axioms", help="Lie bialgebra defects on basis words")
    _common(p, framing=True)
    p.add_argument("--random", type=int, default=20, help="random Jacobi triples")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("center", help="center of the graded bracket by exact kernels")
    _common(p)
    p.set_defaults(func=cmd_center)

    for name, func, help_ in (
        ("div", cmd_div, "divergence (genus 0)"),
        ("tdiv", cmd_tdiv, "double divergence"),
    ):
        p = sub.add_parser(name, help=help_)
        _common(p, degree=False)
        _tder_args(p)
        p.set_defaults(func=func)

    p = sub.add_parser("gdiv", help="framed double divergence")
    _common(p, framing=True)
    _tder_args(p)
    p.set_defaults(func=cmd_gdiv)

    p = sub.add_parser("jcocycle", help="Jacobian cocycles J, j, C_q, j_q of exp(u) or of a KV solution")
    _common(p, framing=True)
    _tder_args(p)
    p.add_argument("--kv-solution", dest="kv_solution")
    p.add_argument("--inverse", action="store_true", help="evaluate at F^{-1}")
    p.set_defaults(func=cmd_jcocycle)

    p = sub.add_parser("expansion", help="exponential / twisted expansions")
    esub = p.add_subparsers(dest="action", required=True)
    for action, help_ in (
        ("eval", "theta(w) for the exponential or a twisted expansion"),
        ("weight", "weight-filtration valuation of a group-ring element"),
        ("special", "is the twisted expansion special (KVI)?"),
    ):
        q = esub.add_parser(action, help=help_)
        _common(q)
        if action != "special":
            q.add_argument("element", help='group-ring element, e.g. "a1 c1 - 1"')
        if action != "weight":
            q.add_argument("--kv-solution", dest="kv_solution")
        q.set_defaults(func=cmd_expansion)

    p = sub.add_parser("loop", help="loop operations on free-group words")
    _common(p, framing=True)
    p.add_argument("action", choices=("log", "bracket", "cobracket"))
    p.add_argument("words", nargs="+")
    p.add_argument("--kv-solution", dest="kv_solution")
    p.set_defaults(func=cmd_loop)

    p = sub.add_parser("kv", help="Kashiwara-Vergne solver and checker")
    p.add_argument("action", choices=("solve", "check"))
    p.add_argument("--g", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--degree", type=int, default=4)
    p.add_argument("--framing")
    p.add_argument("--seed", type=int, default=None, help="gauge seed")
    p.add_argument("--kvI-only", dest="kvI_only", action="store_true")
    p.add_argument("--solution", help="report JSON written by kv solve")
    p.add_argument("--out", help="write the report JSON here")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_kv)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "kv" and args.action == "solve" and (args.g is None or args.n is None):
        parser.error("kv solve needs --g and --n")
    try:
        args.func(args)
    except UsageError as exc:
        print(f"gt: usage error: {exc}", file=sys.stderr)
        return 2
    except GTError as exc:
        print(f"gt: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
