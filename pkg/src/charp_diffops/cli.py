"""Command-line frontend: read a variety spec (JSON), run analyses, print a JSON report.

Exit codes: 0 success (regular), 3 singular, 4 some verification failed,
1 usage or parse error.  Timing goes to stderr so stdout stays byte-stable.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from typing import List, Optional

from .der import (Derivation, check_descends, cofactors, complement, derivation_generators, format_derivation,
                  membership_der, reconstruct, verify_derel)
from .dop import (Chart, build_dk, coeff_a, coeff_a_psi, compute_schedule, in_DA, merge_schedules,
                  verify_R, verify_R5, verify_rel_rpC)
from .fixtures import Variety, VarietySpec
from .hs import (check_commute, check_iterative, check_jacobian_invariance, check_nilpotent, check_unique,
                 extdix_agrees, hom_validate, hs_lift, order_one_matches)
from .parsing import ParseError
from .poly import random_poly
from .ring import LocElem
from .weyl import parse_weyl, print_weyl

EXIT_OK, EXIT_ERROR, EXIT_SINGULAR, EXIT_FAILED = 0, 1, 3, 4


def fmt_loc(a: LocElem, symbol: str = "Δ") -> str:
    """num/Δ^s with the numerator bracketed when it has several terms."""
    a = a.normalized()
    num = str(a.num)
    if a.s == 0:
        return num
    if len(a.num) > 1:
        num = "(%s)" % num
    return "%s/%s" % (num, symbol) + ("^%d" % a.s if a.s > 1 else "")


def parse_base(text: str):
    """'1;1' or '1,2;2,3' -> ((1,), (1,)) / ((1, 2), (2, 3)); empty sides allowed."""
    if ";" not in text:
        raise ValueError("base must look like 'i1,..;j1,..'")
    left, right = text.split(";", 1)

    def tup(s):
        s = s.strip()
        return tuple(int(x) for x in s.split(",")) if s else ()

    return tup(left), tup(right)


def threads_from_env() -> int:
    try:
        return max(1, int(os.environ.get("CHARP_DIFFOPS_THREADS", "1")))
    except ValueError:
        return 1


# -- sections -----------------------------------------------------------------

def cmd_analyze(V: Variety) -> dict:
    jd = V.jd
    ts = jd.tuples
    reg = jd.regular_check()
    out = {
        "r": jd.r,
        "Ir": [list(t) for t in ts.Ir],
        "Jr": [list(t) for t in ts.Jr],
        "Jr1": [list(t) for t in ts.Jr1],
        "regular": reg.regular,
        "groebner_basis": [str(g) for g in V.ideal.gb],
        "jacobian": jd.J.to_strings(),
        "default_base": [list(t) for t in jd.default_base()],
    }
    if reg.regular:
        out["certificate"] = {"generators": [str(g) for g in reg.generators],
                              "cofactors": [str(c) for c in reg.certificate]}
    else:
        out["jacobian_ideal_groebner_basis"] = [str(g) for g in reg.groebner_basis]
    return out


def cmd_ders(V: Variety, queries: List[List[str]] = ()) -> dict:
    jd = V.jd
    ts = jd.tuples
    gens = derivation_generators(jd)
    gen_out = []
    for (i, jj), D in sorted(gens.items()):
        gen_out.append({"i": list(i), "j": list(jj), "coeffs": D.to_strings(),
                        "text": format_derivation(cofactors(jd, i, jj), "∂"),
                        "descends": check_descends(D)})
    derel = []
    for i in ts.Ir:
        for i2 in ts.Ir:
            for j in ts.Jr:
                for j2 in ts.Jr1:
                    derel.append({"i": list(i), "i2": list(i2), "j": list(j), "j2": list(j2),
                                  "pass": verify_derel(jd, i, i2, j, j2)})
    out = {
        "generators": gen_out,
        "derel": {"count": len(derel), "pass": all(d["pass"] for d in derel), "instances": derel},
    }
    # Leibniz spot check on seeded random elements
    rng = random.Random(V.spec.seed)
    leib = True
    for (i, jj), D in sorted(gens.items()):
        for _ in range(5):
            a = random_poly(V.ambient, rng, 3)
            b = random_poly(V.ambient, rng, 3)
            if D(a * b) != D(a) * V.ideal.reduce(b) + D(b) * V.ideal.reduce(a):
                leib = False
    out["leibniz"] = leib
    if queries:
        i, j = jd.default_base()
        qs = []
        for coeffs in queries:
            D = Derivation(V.ideal, [V.poly(c) for c in coeffs])
            entry = {"coeffs": D.to_strings(), "descends": check_descends(D)}
            if entry["descends"]:
                res = membership_der(jd, D, i, j)
                entry["member"] = res.member
                entry["values"] = {"x%d" % k: str(v) for k, v in sorted(res.values.items())}
                back = reconstruct(jd, res.values, i, j) if res.member else None
                entry["round_trip"] = back is not None and back == D
            qs.append(entry)
        out["membership"] = {"base": [list(i), list(j)], "queries": qs}
    return out


def _ok(section: dict) -> bool:
    """No boolean check in a report section came out false."""
    bad = False

    def walk(x, key=None):
        nonlocal bad
        if isinstance(x, dict):
            for k, v in x.items():
                walk(v, k)
        elif isinstance(x, list):
            for v in x:
                walk(v, key)
        elif x is False and key in _CHECK_KEYS:
            bad = True

    walk(section)
    return not bad


_CHECK_KEYS = {"pass", "descends", "leibniz", "round_trip", "hom_validate", "order_one", "iterative",
               "nilpotent", "commute", "extdix_agrees", "unique", "in_DA", "superadditive",
               "psi_agrees", "top_coefficient", "jacobian_invariance", "validated"}


def cmd_hs(V: Variety, base=None, nu: Optional[int] = None, N: Optional[int] = None) -> dict:
    jd = V.jd
    i, j = base if base is not None else jd.default_base()
    N = V.spec.N if N is None else N
    chart_ring = None
    families = {}
    comp = complement(jd.n, j)
    if not comp:
        return {"base": [list(i), list(j)], "families": {}, "note": "no complement variables"}
    nus = [nu] if nu is not None else comp
    for c in comp:
        H = hs_lift(jd, i, j, c, N, chart_ring)
        chart_ring = H.ring
        families[c] = H
    p = V.spec.p
    out = {"base": [list(i), list(j)], "Delta": str(jd.minor(i, j)), "N": N, "families": {}}
    for c in nus:
        H = families[c]
        entry = {
            "images": {name: [fmt_loc(a) for a in s.c] for name, s in zip(V.ambient.names, H.images)},
            "hom_validate": hom_validate(H),
            "order_one": order_one_matches(H),
            "iterative": all(check_iterative(H, a, b) for a in range(1, N) for b in range(1, N + 1 - a)),
            "unique": check_unique(H, (tuple(reversed(range(len(i)))), tuple(reversed(range(len(j)))))),
        }
        if p <= N:
            entry["nilpotent"] = check_nilpotent(H, 1)
        if len(V.ideal.generators) == 1 and jd.r == 1:
            entry["extdix_agrees"] = extdix_agrees(H)
        out["families"]["x%d" % c] = entry
    if len(comp) > 1:
        kl = min(4, N)
        out["commute"] = all(
            check_commute(families[a], families[b], k, l)
            for a in comp for b in comp if a < b
            for k in range(1, kl + 1) for l in range(1, kl + 1 - k)
        )
    return out


def cmd_dops(V: Variety, base=None, threads: int = 1, evaluate: bool = True) -> dict:
    jd = V.jd
    spec = V.spec
    i, j = base if base is not None else jd.default_base()
    N = spec.N
    K = min(spec.K_max, N)
    chart = Chart(jd, i, j, N)
    sched = compute_schedule(chart, K)
    out = {"base": [list(i), list(j)], "Delta": str(chart.delta_poly), "schedule": sched.to_json(),
           "superadditive": sched.superadditive()}
    out["dk"] = {
        "x%d" % nu: [{"k": k, "n": sched.n_of(k), "in_DA": in_DA(build_dk(chart, sched, nu, k))}
                     for k in range(K + 1)]
        for nu in chart.comp
    }
    tables = {}
    for nu in chart.comp:
        rows = []
        for k in range(1, K + 1):
            for s in range(2):
                a = coeff_a(chart, sched, nu, k, s)
                entry = {"k": k, "s": s, "a": [str(a[t]) for t in range(k + 1)],
                         "top_coefficient": a[k] == jd.ideal.reduce(chart.delta_poly ** k)}
                if k <= 2:
                    b = coeff_a_psi(chart, sched, nu, k, s)
                    entry["psi_agrees"] = all(a[t] == b[t] for t in a)
                rows.append(entry)
        tables["x%d" % nu] = rows
    out["a_tables"] = tables
    regular = jd.regular_check().regular
    kr = min(3, K, N // 2)
    if regular:
        out["rpC"] = verify_rel_rpC(chart, kr, evaluate, threads).to_json()
        out["R1_R4"] = verify_R(chart, sched, kr, evaluate, threads).to_json()
        pairs = [(a, b) for a in jd.tuples.Ir for b in jd.tuples.Jr]
        target = next((pq for pq in pairs if pq != (i, j)), (i, j))
        tchart = Chart(jd, target[0], target[1], N) if target != (i, j) else chart
        both = merge_schedules([sched, compute_schedule(tchart, K)])
        r5 = {"base": [list(i), list(j)], "target": [list(target[0]), list(target[1])],
              "schedule": both.to_json(), "by_sigma": {}}
        l_max = min(2, K)
        for sigma in complement(jd.n, target[1]):
            rep = verify_R5(jd, (i, j), target, sigma, both, l_max, N, spec.slack, evaluate)
            r5["by_sigma"]["x%d" % sigma] = rep.to_json()
        out["R5"] = r5
    else:
        out["relations"] = "skipped: variety is not regular"
        nu = chart.comp[0]
        H = chart.families[nu]
        out["jacobian_invariance"] = {
            "family": "x%d" % nu,
            "checks": [{"k": k, "pass": check_jacobian_invariance(H, k, sched.n_of(k))} for k in range(K + 1)],
        }
    return out


def cmd_weyl(expr: str, V: Variety) -> dict:
    u = parse_weyl(expr, V.ambient)
    return {"input": expr, "normal_form": print_weyl(u), "order": u.order()}


# -- driver ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="charp-diffops", description=__doc__.splitlines()[0])
    ap.add_argument("spec", help="JSON variety spec file, or '-' for stdin")
    ap.add_argument("--analyze", action="store_true", help="rank, tuple sets, regularity")
    ap.add_argument("--ders", action="store_true", help="determinant derivations and their relations")
    ap.add_argument("--hs", action="store_true", help="lift and check higher derivations")
    ap.add_argument("--dops", action="store_true", help="generators d^[k], coefficient tables, relation suites")
    ap.add_argument("--weyl", metavar="EXPR", help="normal form of an operator in the Weyl algebra")
    ap.add_argument("--base", metavar="I;J", help="base pair, e.g. '1;1' or '1,2;2,3'")
    ap.add_argument("--nu", type=int, help="distinguished complement variable (1-based)")
    ap.add_argument("--no-eval", action="store_true", help="skip the evaluation cross-check in relation suites")
    ap.add_argument("--json-out", metavar="PATH", help="also write the report to PATH")
    return ap


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    t0 = time.perf_counter()
    try:
        text = sys.stdin.read() if args.spec == "-" else open(args.spec, encoding="utf-8").read()
        raw = json.loads(text)
        queries = raw.pop("derivations", [])
        spec = VarietySpec.from_dict(raw)
        V = Variety(spec)
        base = parse_base(args.base) if args.base else None
        if base is not None:
            ts = V.jd.tuples
            if base[0] not in ts.Ir or base[1] not in ts.Jr:
                raise ValueError("base %s is not a nonsingular pair" % args.base)
    except (OSError, ValueError, ParseError) as e:
        print("error: %s" % e, file=stderr)
        return EXIT_ERROR

    report = {"spec": spec.to_dict(), "assumed_prime": True}
    if queries:
        report["spec"]["derivations"] = queries
    wants = [args.analyze, args.ders, args.hs, args.dops]
    if not any(wants) and args.weyl is None:
        args.analyze = True
    threads = threads_from_env()
    timings = {}
    ok = True
    try:
        regular = None
        if args.analyze or args.ders or args.hs or args.dops:
            regular = V.jd.regular_check().regular
        sections = [
            ("analyze", args.analyze, lambda: cmd_analyze(V)),
            ("ders", args.ders, lambda: cmd_ders(V, queries)),
            ("hs", args.hs, lambda: cmd_hs(V, base, args.nu)),
            ("dops", args.dops, lambda: cmd_dops(V, base, threads, not args.no_eval)),
            ("weyl", args.weyl is not None, lambda: cmd_weyl(args.weyl, V)),
        ]
        for name, wanted, fn in sections:
            if not wanted:
                continue
            t = time.perf_counter()
            report[name] = fn()
            timings[name] = time.perf_counter() - t
            if name != "analyze":
                ok = ok and _ok(report[name])
    except (ValueError, ParseError) as e:
        print("error: %s" % e, file=stderr)
        return EXIT_ERROR

    text = json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    stdout.write(text)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(text)
    for name, secs in timings.items():
        print("%-8s %.3fs" % (name, secs), file=stderr)
    print("total    %.3fs" % (time.perf_counter() - t0), file=stderr)
    if not ok:
        print("verification failures present", file=stderr)
        return EXIT_FAILED
    if regular is False:
        return EXIT_SINGULAR
    return EXIT_OK


def main() -> None:
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")
    sys.exit(run())


if __name__ == "__main__":
    main()
