"""Command-line front end.

Exit codes: 0 the property holds, 2 it is violated (a witness is printed),
3 usage or parse error, 4 a resource or precision limit was hit.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from binpleth import biring, ivp, perfection, plethory, reflect, witt
from binpleth.core import BPoly, PolyParseError, compose, from_binomial, parse_bpoly
from binpleth.report import Report
from binpleth.rings import RingSpecError, parse_ring

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE, EXIT_LIMIT = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _frac(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}") from None


def _bjson(f: BPoly) -> dict:
    return {"coeffs": [str(c) for c in f.coeffs]}


def _emit(args, payload: dict, text: str, ok: bool = True) -> int:
    if args.json:
        print(json.dumps(payload, default=str))
    else:
        print(text)
    return EXIT_OK if ok else EXIT_VIOLATED


def _emit_report(args, rep: Report, headline: str) -> int:
    lines = [f"{headline}: {'holds' if rep.ok else 'VIOLATED'} ({rep.cases} cases)"]
    lines += [f"  witness: {w}" for w in rep.failures[:10]]
    return _emit(args, rep.as_dict(), "\n".join(lines), rep.ok)


def _random_bpoly(rng: random.Random, deg: int, bound: int = 3) -> BPoly:
    return BPoly(rng.randint(-bound, bound) for _ in range(rng.randint(0, deg) + 1))


# ---------------------------------------------------------------------------
# subcommands


def cmd_convert(args):
    f = parse_bpoly(args.poly)
    mono = from_binomial(f)
    payload = {"binomial": _bjson(f), "monomial": str(mono), "int_valued": f.is_int_valued()}
    text = f"binomial: {f}\nmonomial: {mono}\ninteger-valued: {f.is_int_valued()}"
    return _emit(args, payload, text)


def cmd_compose(args):
    h = compose(parse_bpoly(args.f), parse_bpoly(args.g))
    return _emit(args, _bjson(h), str(h))


def cmd_coop(args, op):
    T = op(parse_bpoly(args.poly))
    return _emit(args, json.loads(T.to_json()), str(T))


def cmd_verify_axioms(args):
    kw = {"coadd_basis": biring.corrupt_coadd_basis} if args.corrupt else {}
    rep = biring.verify_biring_axioms(args.degree, **kw)
    d = rep.as_dict()
    lines = [f"biring axioms up to degree {args.degree}: {'all pass' if rep.ok else 'VIOLATED'}"]
    for ax in biring.BIRING_AXIOMS:
        fails = rep.failures[ax]
        lines.append(f"  {ax:20s} {'ok' if not fails else 'fails at n=' + ','.join(map(str, fails))}")
    return _emit(args, d, "\n".join(lines), rep.ok)


def cmd_relations(args):
    rng = random.Random(args.seed)
    rep = Report("plethory-relations")
    for _ in range(args.trials):
        f, g, h = (_random_bpoly(rng, args.degree) for _ in range(3))
        c = rng.randint(-5, 5)
        r = plethory.relation_check(f, g, h, c)
        rep.cases += r.cases
        rep.failures += r.failures
        rep.record(plethory.associativity_check(f, g, h), {"associativity": [str(f), str(g), str(h)]})
    return _emit_report(args, rep, f"composition relations on {args.trials} random triples")


def cmd_basis(args):
    gb = ivp.graded_basis(ivp.parse_family(args.family), args.degree)
    diag = [int(x) if x.denominator == 1 else str(x) for x in gb.diagonal]
    payload = {
        "family": str(gb.family),
        "degree": gb.degree,
        "diagonal": diag,
        "elements": [_bjson(e) for e in gb.elements],
        "hnf": json.loads(gb.lattice.canonical().to_json()),
    }
    text = "\n".join([f"{gb.family}, degree <= {gb.degree}", f"diagonal: {diag}"] + [f"  {e}" for e in gb.elements])
    return _emit(args, payload, text)


def cmd_cn(args):
    vals = [ivp.c_n(n) for n in range(args.upto + 1)]
    return _emit(args, {"c_n": vals}, " ".join(map(str, vals)))


def cmd_chain(args):
    res = ivp.chain_witness(args.r, args.dmax, args.kind)
    if res is None:
        return _emit(args, {"r": args.r, "kind": args.kind, "witness": None},
                     f"no strict step between order {args.r} and {args.r + 1} up to degree {args.dmax}")
    d, f = res
    return _emit(args, {"r": args.r, "kind": args.kind, "degree": d, "witness": _bjson(f)},
                 f"first strict degree {d}: {f} is in {args.kind}:{args.r} but not {args.kind}:{args.r + 1}")


def cmd_decompose(args):
    rep = plethory.weakly_composite_check(ivp.parse_family(args.family), args.degree, args.dmax)
    return _emit_report(args, rep, f"tensor decomposition of co-operations for {args.family}")


def cmd_witt(args):
    p, m = args.p, args.m
    pts = witt.witt_points(p, m)
    if not (args.add or args.mul):
        payload = {"p": p, "m": m, "injective": pts.injective, "image_size": pts.image_size}
        return _emit(args, payload, f"Witt points p={p} m={m}: {pts.image_size} distinct of {p**m}; injective={pts.injective}", pts.injective)
    rep = Report(f"witt-{'add' if args.add else 'mul'}")
    q = p**m
    rng = random.Random(args.seed)
    pairs = [(a, b) for a in range(q) for b in range(q)]
    if args.samples and len(pairs) * q > args.samples:
        cases = [(rng.randrange(q), rng.randrange(q), rng.randrange(q)) for _ in range(args.samples)]
    else:
        cases = [(a, b, n) for a, b in pairs for n in range(q)]
    for a, b, n in cases:
        A, B = witt.PadicApprox(p, m, a), witt.PadicApprox(p, m, b)
        f = BPoly.basis(n)
        s, t = witt.witt_ring_ops(A, B, f)
        want = witt.eval_hom(A + B, f) if args.add else witt.eval_hom(A * B, f)
        got = s if args.add else t
        rep.record(got == want, {"alpha": a, "beta": b, "n": n, "route": got, "direct": want})
    return _emit_report(args, rep, f"Witt {'sum' if args.add else 'product'} through co-operations, p={p} m={m}")


def cmd_adams(args):
    tab = witt.adams_universal(args.k, args.trunc)
    polys = [str(P) for P in tab.polys]
    text = "\n".join(f"h'_{n} = {P}" for n, P in enumerate(polys, start=1))
    return _emit(args, {"k": args.k, "trunc": args.trunc, "polys": polys}, text)


def cmd_bin_check(args):
    p, m = args.p, args.m
    N = args.trunc if args.trunc is not None else p**m - 1
    alphas = [args.alpha] if args.alpha is not None else range(p**m)
    rep = Report("bin-fixed")
    for a in alphas:
        F = witt.binomial_series(witt.PadicApprox.of(p, m, a), N)
        rep.record(witt.bin_fixed_check(F, args.K), {"alpha": a, "series": str(F)})
    return _emit_report(args, rep, f"binomial series fixed by psi_2..psi_{args.K}, p={p}")


def cmd_classify(args):
    A = parse_ring(args.spec)
    qb = reflect.quasi_binomial_check(A)
    per_prime = {}
    for p in A.char_primes():
        per_prime[p] = {
            "quasi_binomial": reflect.quasi_binomial_check(A, p),
            "residue_embeds": reflect.residue_embed_check(A, p),
        }
    agree = all(v["quasi_binomial"] == v["residue_embeds"] for v in per_prime.values())
    verdict = "quasi-binomial" if qb else "not quasi-binomial"
    payload = {"ring": A.name, "size": A.size, "char": A.char, "quasi_binomial": qb,
               "per_prime": {str(k): v for k, v in per_prime.items()}, "criteria_agree": agree}
    text = f"{A.name} (order {A.size}, characteristic {A.char}): {verdict}"
    if not agree:
        text += "\n  criteria disagree: " + json.dumps(per_prime)
    return _emit(args, payload, text, qb and agree)


def cmd_dual(args):
    rng = random.Random(args.seed)
    rep = Report("dual-decomposition")
    for _ in range(args.trials):
        f, g = _random_bpoly(rng, args.degree), _random_bpoly(rng, args.degree)
        f = BPoly(c * ivp.c_n(n) if rng.random() < 0.5 else c for n, c in enumerate(f.coeffs))
        a = ivp.dual_decompose_direct(f, g, args.r)
        b = ivp.dual_decompose_split(f, g, args.r)
        rep.record(a == b, {"f": str(f), "g": str(g), "r": args.r, "direct": a, "split": b})
    return _emit_report(args, rep, f"dual-number decision routes agree (r={args.r})")


def cmd_perfection(args):
    A = parse_ring(args.spec)
    perfect = perfection.is_perfect(A)
    P = perfection.perfection_r(A, args.m)
    sizes = perfection.perfection_sizes(A, P.m + 1)
    payload = {"ring": A.name, "perfect": perfect, "chain_length": P.m, "perfection_size": P.size, "sizes": sizes}
    text = (f"{A.name}: {'perfect' if perfect else 'not perfect'}; "
            f"perfection at chain length {P.m} has {P.size} elements (sizes {sizes})")
    return _emit(args, payload, text)


def cmd_wlower(args):
    res = reflect.w_lower(args.m, args.family, args.degree)
    certs = [{"a": [str(x) for x in c.point], "ok": c.ok,
              "images": [str(v) for v in c.images], "obstruction": c.obstruction} for c in res.certificates]
    lines = [f"w_R(Z[1/{args.m}]) = {res.ring}"]
    lines += [f"  a={','.join(c['a'])}: {'forced images exist' if c['ok'] else 'obstruction ' + str(c['obstruction'])}" for c in certs]
    return _emit(args, {"ring": res.ring, "certificates": certs}, "\n".join(lines), res.ok)


def cmd_wupper(args):
    gens = [g if any(ch.isalpha() for ch in g) else _frac(g) for g in args.generators]
    res = reflect.w_upper(gens, args.family, args.degree, args.steps)
    diag = None if res.diagonal is None else [str(x) for x in res.diagonal]
    payload = {"scalars": str(res.scalars), "degree": res.degree, "diagonal": diag, "stable": res.stable, "steps": res.steps}
    if not res.stable:
        print(res.description(), file=sys.stderr)
        return _emit(args, payload, res.description() + " [partial: steps exhausted]", False)
    return _emit(args, payload, res.description())


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for random trials")

    ap = _Parser(prog="binpleth", description="Exact computations with integer-valued polynomials.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("convert", cmd_convert, "monomial <-> binomial basis")
    sp.add_argument("poly")
    sp = add("compose", cmd_compose, "f(g(X))")
    sp.add_argument("f")
    sp.add_argument("g")
    sp = add("coadd", lambda a: cmd_coop(a, biring.coadd), "f(X+Y) on the tensor basis")
    sp.add_argument("poly")
    sp = add("comul", lambda a: cmd_coop(a, biring.comul), "f(XY) on the tensor basis")
    sp.add_argument("poly")
    sp = add("verify-axioms", cmd_verify_axioms, "biring axioms on C(X,n)")
    sp.add_argument("--degree", type=int, default=8)
    sp.add_argument("--corrupt", action="store_true", help="run the broken-coaddition control")
    sp = add("relations", cmd_relations, "composition relations on random triples")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--degree", type=int, default=4)
    sp = add("basis", cmd_basis, "graded basis of a family")
    sp.add_argument("--family", default="int")
    sp.add_argument("--degree", type=int, default=8)
    sp = add("cn", cmd_cn, "the c_n sequence")
    sp.add_argument("--upto", type=int, default=8)
    sp = add("chain", cmd_chain, "first strict step in the derivative/difference chain")
    sp.add_argument("--r", type=int, default=0)
    sp.add_argument("--dmax", type=int, default=10)
    sp.add_argument("--kind", choices=("dint", "fdint"), default="dint")
    sp = add("decompose", cmd_decompose, "tensor decomposability of co-operations")
    sp.add_argument("--family", default="int")
    sp.add_argument("--degree", type=int, default=8)
    sp.add_argument("--dmax", type=int, default=None)
    sp = add("witt", cmd_witt, "Witt points of Int(Z) over F_p")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--m", type=int, default=2)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--add", action="store_true")
    g.add_argument("--mul", action="store_true")
    sp.add_argument("--samples", type=int, default=0, help="sample this many cases instead of all")
    sp = add("adams", cmd_adams, "universal Adams polynomials")
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--trunc", type=int, default=3)
    sp = add("bin-check", cmd_bin_check, "binomial series fixed by Adams operations")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--m", type=int, default=3)
    sp.add_argument("--alpha", type=int, default=None)
    sp.add_argument("--trunc", type=int, default=None)
    sp.add_argument("--K", type=int, default=3)
    sp = add("classify-ring", cmd_classify, "quasi-binomial classifier")
    sp.add_argument("spec")
    sp = add("dual", cmd_dual, "dual-number decomposition, both routes")
    sp.add_argument("--r", type=int, default=0)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--degree", type=int, default=4)
    sp = add("perfection", cmd_perfection, "Frobenius and perfection of a finite ring")
    sp.add_argument("spec")
    sp.add_argument("--m", type=int, default=None)
    sp = add("wlower", cmd_wlower, "largest reflective subring of Z[1/m]")
    sp.add_argument("--m", type=int, default=6)
    sp.add_argument("--family", default="int")
    sp.add_argument("--degree", type=int, default=8)
    sp = add("wupper", cmd_wupper, "reflective closure of generators")
    sp.add_argument("generators", nargs="*")
    sp.add_argument("--family", default="int")
    sp.add_argument("--degree", type=int, default=6)
    sp.add_argument("--steps", type=int, default=10)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (witt.PrecisionError, reflect.SizeLimitError) as exc:
        print(f"limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (PolyParseError, RingSpecError, argparse.ArgumentTypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
