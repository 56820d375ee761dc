"""Command line interface: one subcommand per pipeline, JSON in and out.

Exit codes: 0 success or Accept, 1 Reject or a negative finding, 2 usage or
budget errors.  The same arguments and seed always produce the same JSON.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import warnings
from importlib import resources

import jsonschema

from weilcert import seeding
from weilcert.algebra.field import field_make
from weilcert.algebra.intpoly import IntPoly
from weilcert.curve import (POINT_BUDGET, PlaneCurve, check_weil, count_cost, count_points,
                            genus)
from weilcert.errors import BudgetExceeded, WeilcertError
from weilcert.jacobian import GROUP_BUDGET

log = logging.getLogger("weilcert")

COMMANDS = ("field", "count", "zeta", "jacobian", "certify", "certify-structure", "pencil",
            "p1-surface", "simulate-gcd", "symplectic")


class UsageError(Exception):
    pass


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _load_curve(path):
    try:
        return PlaneCurve.from_json(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path} is not a plane curve description: {exc}") from exc


def _load_surface(path):
    from weilcert.surface import Hypersurface
    try:
        return Hypersurface.from_json(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path} is not a hypersurface description: {exc}") from exc


def _load_p1(path, q, g):
    from weilcert.zeta import ZetaNumerator
    obj = _load_json(path)
    coeffs = obj["coeffs"] if isinstance(obj, dict) else obj
    return ZetaNumerator(q, g, IntPoly(int(c) for c in coeffs), check=False)


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") \
            from exc


def _figure_dir(args):
    return getattr(args, "figures", None)


# -- subcommands -----------------------------------------------------------------

def cmd_field(args):
    F = field_make(args.p, args.k, seed=args.modulus_seed)
    out = {"p": F.p, "k": F.k, "q": F.q, "modulus": list(F.modulus)}
    if args.frobenius is not None:
        x = F.from_coords(args.frobenius)
        out["frobenius"] = [F.coords(F.frobenius(x, e)) for e in range(F.k + 1)]
    return out, 0


def cmd_count(args):
    c = _load_curve(args.curve)
    js = list(range(1, args.jmax + 1)) if args.jmax else [args.j]
    counts = [count_points(c, j, args.budget_points) for j in js]
    g = genus(c)
    ok = [check_weil(c, j, N) for j, N in zip(js, counts)]
    out = {"q": c.q, "degree": c.degree, "genus": g,
           "counts": [{"j": j, "N": N, "weil_ok": w} for j, N, w in zip(js, counts, ok)]}
    return out, 0 if all(ok) else 1


def cmd_zeta(args):
    from weilcert.zeta import expected_counts, p1_from_counts, root_modulus_check
    c = _load_curve(args.curve)
    g = genus(c)
    jmax = max(args.jmax, g)
    counts = [count_points(c, j, args.budget_points) for j in range(1, g + 1)]
    P = p1_from_counts(counts, c.q, g)
    predicted = expected_counts(P, jmax)
    checks = []
    for j in range(g + 1, jmax + 1):
        if count_cost(c, j) > args.budget_points:
            checks.append({"j": j, "predicted": predicted[j - 1], "counted": None,
                           "match": None})
            continue
        N = count_points(c, j, args.budget_points)
        checks.append({"j": j, "predicted": predicted[j - 1], "counted": N,
                       "match": N == predicted[j - 1]})
    ok, worst = root_modulus_check(P, warn=False)
    out = {"q": c.q, "genus": g, "counts": counts, "p1": P.to_json(),
           "symmetric": P.symmetric(), "hasse_weil": not P.violations(),
           "predicted_counts": predicted, "checks": checks,
           "root_modulus": {"ok": ok, "worst_relative_error": float(f"{worst:.3e}")}}
    figs = _figure_dir(args)
    if figs:
        from weilcert import plots
        out["figures"] = [plots.weil_deviation(predicted, c.q, g, figs)]
    bad = any(ch["match"] is False for ch in checks) or not ok
    return out, 1 if bad else 0


def cmd_jacobian(args):
    from weilcert.jacobian import Jacobian, class_group_bruteforce
    from weilcert.protocol import _base_point
    from weilcert.zeta import p1_from_counts
    c = _load_curve(args.curve)
    g = genus(c)
    jac = Jacobian(c, _base_point(c), seed=seeding.split(args.seed, "jacobian"))
    st = class_group_bruteforce(jac, args.budget_group, seed=seeding.split(args.seed, "group"))
    out = {"q": c.q, "genus": g, "size": st.size, "orders": st.orders,
           "generators": [D.to_json() for D in st.generators]}
    consistent = True
    if all(count_cost(c, j) <= args.budget_points for j in range(1, g + 1)):
        P = p1_from_counts([count_points(c, j) for j in range(1, g + 1)], c.q, g)
        out["p1_at_one"] = P.value_at_one()
        consistent = P.value_at_one() == st.size
    out["consistent"] = consistent
    return out, 0 if consistent else 1


def _session_summary(sessions):
    rows = []
    for s in sessions:
        t = s.verdict.tallies
        rows.append({"N": s.challenge.N, "Q": str(s.challenge.Q), "accepted": s.verdict.accepted,
                     "hits": t.get("hits"), "threshold": t.get("threshold"),
                     "reasons": list(s.verdict.reasons)})
    return rows


def _write_transcript(sessions, path):
    lines = [line for s in sessions for line in s.transcript()]
    text = "\n".join(lines) + ("\n" if lines else "")
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return hashlib.sha256(text.encode()).hexdigest(), len(lines)


def _session_figure(args, sessions, out):
    figs = _figure_dir(args)
    if figs and sessions:
        from weilcert import plots
        rows = _session_summary(sessions)
        out["figures"] = [plots.session_hits(
            [r["hits"] or 0 for r in rows], [r["threshold"] or 0 for r in rows],
            [f"Q={r['Q']}" for r in rows], figs)]


def cmd_certify(args):
    from weilcert.protocol import certify_zeta
    c = _load_curve(args.curve)
    g = genus(c)
    claimed = _load_p1(args.claimed_p1, c.q, g)
    sessions = []
    v = certify_zeta(c, claimed, seeding.np_rng(args.seed, "certify"), args.budget_group,
                     t=args.pairs, log=sessions)
    digest, nlines = _write_transcript(sessions, args.transcript)
    out = {"q": c.q, "genus": g, "claimed": [str(x) for x in claimed.coeffs],
           "verdict": v.to_json(), "sessions": _session_summary(sessions),
           "transcript": {"path": args.transcript, "lines": nlines, "sha256": digest}}
    _session_figure(args, sessions, out)
    return out, 0 if v.accepted else 1


def cmd_certify_structure(args):
    from weilcert.protocol import certify_group_structure
    c = _load_curve(args.curve)
    g = genus(c)
    claimed = _load_p1(args.claimed_p1, c.q, g) if args.claimed_p1 else None
    sessions = []
    v = certify_group_structure(c, args.orders, seeding.np_rng(args.seed, "certify-structure"),
                                budget=args.budget_group, t=args.pairs, claimed_p1=claimed,
                                log=sessions)
    digest, nlines = _write_transcript(sessions, args.transcript)
    out = {"q": c.q, "genus": g, "orders": args.orders, "verdict": v.to_json(),
           "sessions": _session_summary(sessions),
           "transcript": {"path": args.transcript, "lines": nlines, "sha256": digest}}
    _session_figure(args, sessions, out)
    return out, 0 if v.accepted else 1


def cmd_pencil(args):
    from weilcert.surface import euler_consistency, lefschetz_pencil
    X = _load_surface(args.surface)
    P = lefschetz_pencil(X, seeding.py_rng(args.seed, "pencil"))
    out = P.to_json()
    out["beta2_blowup"] = euler_consistency(P.num_critical, P.g_fiber, 0, P.base_points,
                                            X.degree, X.N)
    out["events"] = P.events
    figs = _figure_dir(args)
    if figs:
        from weilcert import plots
        out["figures"] = [plots.critical_degrees([z.degree for z in P.Z], figs)]
    return out, 0


def cmd_p1_surface(args):
    from weilcert.surface import BelowThresholdWarning, p1_surface_gcd
    X = _load_surface(args.surface)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", BelowThresholdWarning)
        res = p1_surface_gcd(X, seeding.py_rng(args.seed, "p1-surface"), Q_override=args.Q,
                             pairs=args.pairs, budget=args.budget_points)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    out = res.to_json()
    out["g_fiber"] = res.pencil.g_fiber
    figs = _figure_dir(args)
    if figs:
        from weilcert import plots
        traces = [-int(P[1]) for pr in res.pairs for P in pr["fiber_p1"]]
        out["figures"] = [plots.fiber_traces(traces, res.Q, figs)]
    return out, 0


def cmd_simulate_gcd(args):
    from weilcert.surface import SyntheticPencilParams, budget_params, synthetic_pencil_trial
    if args.Q is None:
        params = budget_params(args.beta1, args.g, args.ell, args.chiU)
    else:
        params = SyntheticPencilParams(args.beta1, args.g, args.ell, args.Q, args.chiU)
    res = synthetic_pencil_trial(params, args.trials, seeding.np_rng(args.seed, "simulate-gcd"))
    out = res.to_json()
    figs = _figure_dir(args)
    if figs:
        from weilcert import plots
        out["figures"] = [plots.synthetic_rates(res.success_rate, res.predicted_lower_bound,
                                                2 / 3, res.trials, figs)]
    return out, 0 if out["meets_two_thirds"] else 1


def cmd_symplectic(args):
    from weilcert import symplectic as sp
    r, ell, gamma = args.r, args.ell, args.gamma % args.ell
    if args.action == "count":
        dist = sp.charpoly_distribution(r, ell, gamma, args.budget_group)
        lo, hi = sp.lemma_bracket(r, ell)
        out = {"r": r, "ell": ell, "gamma": gamma, "bracket": [lo, hi],
               "group_order": sum(dist.values()), "sp_order": sp.sp_order(r, ell),
               "classes_realized": len(dist)}
        if args.f is not None:
            n = sp.count_charpoly(r, ell, gamma, args.f, dist=dist)
            out["f"] = args.f
            out["count"] = n
            out["in_bracket"] = n == 0 or lo <= n <= hi
        else:
            out["counts"] = [{"f": list(f), "count": n} for f, n in sorted(dist.items())]
            out["in_bracket"] = all(lo <= n <= hi for n in dist.values())
        figs = _figure_dir(args)
        if figs:
            from weilcert import plots
            out["figures"] = [plots.charpoly_counts(list(dist.values()), (lo, hi), ell, r, figs)]
        return out, 0 if out["in_bracket"] else 1
    rng = seeding.np_rng(args.seed, "symplectic")
    f = args.f if args.f is not None else list(sp.random_gsp(r, ell, gamma, rng).charpoly())
    prop = sp.coprime_proportion(r, ell, gamma, f, args.method, args.samples, rng,
                                 args.budget_group)
    out = {"r": r, "ell": ell, "gamma": gamma, "f": [int(x) % ell for x in f],
           "proportion": prop.to_json(), "lemma_regime": ell > 119 * r * r}
    figs = _figure_dir(args)
    if figs:
        from weilcert import plots
        out["figures"] = [plots.proportion(prop.value, prop.sigma, prop.bound, figs)]
    return out, 0 if prop.within_bound else 1


HANDLERS = {"field": cmd_field, "count": cmd_count, "zeta": cmd_zeta, "jacobian": cmd_jacobian,
            "certify": cmd_certify, "certify-structure": cmd_certify_structure,
            "pencil": cmd_pencil, "p1-surface": cmd_p1_surface,
            "simulate-gcd": cmd_simulate_gcd, "symplectic": cmd_symplectic}


# -- parser ----------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    common.add_argument("--budget-points", type=int, default=POINT_BUDGET,
                        help="cap on enumerated points / grid cells")
    common.add_argument("--budget-group", type=int, default=GROUP_BUDGET,
                        help="cap on enumerated group elements")
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--out", help="also write the JSON report to this file")
    common.add_argument("-v", "--verbose", action="count", default=0)

    figures = argparse.ArgumentParser(add_help=False)
    figures.add_argument("--figures", metavar="DIR", help="render figures into DIR")

    parser = argparse.ArgumentParser(prog="weilcert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", parents=[common], help="construct F_{p^k}")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--modulus-seed", type=int, default=None)
    p.add_argument("--frobenius", type=_int_list, default=None,
                   help="coordinates of an element whose Frobenius orbit is printed")

    p = sub.add_parser("count", parents=[common], help="count points of a plane curve")
    p.add_argument("--curve", required=True)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--jmax", type=int, default=None)

    p = sub.add_parser("zeta", parents=[common, figures], help="P1 of a plane curve")
    p.add_argument("--curve", required=True)
    p.add_argument("--jmax", type=int, default=0)

    p = sub.add_parser("jacobian", parents=[common], help="structure of Jac(C)(F_q)")
    p.add_argument("--curve", required=True)

    helps = {"certify": "interactively certify a claimed P1",
             "certify-structure": "interactively certify claimed invariant factors"}
    for name in ("certify", "certify-structure"):
        p = sub.add_parser(name, parents=[common, figures], help=helps[name])
        p.add_argument("--curve", required=True)
        p.add_argument("--claimed-p1", required=(name == "certify"))
        p.add_argument("--pairs", type=int, default=None, help="hash pairs per session")
        p.add_argument("--transcript", default=None, help="JSON-lines transcript file")
        if name == "certify-structure":
            p.add_argument("--orders", type=_int_list, required=True)

    p = sub.add_parser("pencil", parents=[common, figures], help="validated Lefschetz pencil")
    p.add_argument("--surface", required=True)

    p = sub.add_parser("p1-surface", parents=[common, figures], help="gcd of fiber P1s")
    p.add_argument("--surface", required=True)
    p.add_argument("--Q", type=int, default=None)
    p.add_argument("--pairs", type=int, default=10)

    p = sub.add_parser("simulate-gcd", parents=[common, figures], help="synthetic gcd trials")
    p.add_argument("--beta1", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--Q", type=int, default=None,
                   help="sampling field size (default: least square meeting the error budget)")
    p.add_argument("--chiU", type=int, default=12)

    p = sub.add_parser("symplectic", parents=[common, figures], help="GSp(2r, F_l) statistics")
    p.add_argument("action", choices=("count", "proportion"))
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--gamma", type=int, default=1)
    p.add_argument("--f", type=_int_list, default=None, help="ascending coefficients of f")
    p.add_argument("--method", choices=("exact", "montecarlo"), default="montecarlo")
    p.add_argument("--samples", type=int, default=10 ** 4)
    return parser


def load_schema(command):
    text = resources.files("weilcert.schemas").joinpath(f"{command}.json").read_text()
    return json.loads(text)


def _summary(payload):
    for key in sorted(payload):
        val = payload[key]
        if isinstance(val, (int, float, str, bool)) or val is None:
            yield f"{key}: {val}"
        elif key == "verdict":
            yield f"verdict: {'ACCEPT' if val['accepted'] else 'REJECT'} {val['reasons']}"


def dispatch(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        payload, code = HANDLERS[args.command](args)
    except (UsageError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return 2
    except (WeilcertError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    payload = {"command": args.command, "seed": args.seed, **payload}
    jsonschema.validate(payload, load_schema(args.command))
    text = json.dumps(payload, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if args.json:
        print(text)
    else:
        for line in _summary(payload):
            print(line)
    return code


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
