"""Command-line interface.

Subcommands mirror the library layout: ``field`` (inspect a finite field),
``oa`` (build and check row arrays), ``cw`` (constant-weight codes),
``family`` (set-family verification), ``acc`` (code construction and
verification), ``attack`` / ``trace`` (collusion simulation), the
conjecture scan ``scan-remark6``, and ``preset`` (canonical pipelines).

Exit codes: 0 when the requested property holds or the build succeeds,
1 when a property fails (a witness is printed as JSON on stdout), and
2 for usage or file-format errors.  User indices on the command line are
1-based, matching the on-disk codeword order; family member indices are
0-based, matching the JSON schema.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import accs, arrays, collusion, cwcodes, families, presets
from .gf import FieldError, parse_field

PASS, FAIL, USAGE = 0, 1, 2


def _emit(obj, as_json: bool, text: str | None = None) -> None:
    if as_json:
        print(json.dumps(obj, sort_keys=True))
    elif text is not None:
        print(text)


def _parse_indices(text: str, base: int = 0) -> list[int]:
    """Parse '2,5,7' or ranges '0-8' (inclusive) into 0-based indices."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if "-" in tok:
            lo, hi = tok.split("-", 1)
            out.extend(range(int(lo) - base, int(hi) - base + 1))
        else:
            out.append(int(tok) - base)
    if not out:
        raise ValueError(f"no indices in {text!r}")
    return out


# ---------------------------------------------------------------------------
# field
# ---------------------------------------------------------------------------

def cmd_field_elements(args) -> int:
    gf = parse_field(args.field)
    elems = gf.elements()
    _emit({"s": gf.s, "p": gf.p, "e": gf.e, "elements": elems}, args.json,
          f"GF({gf.s}): " + " ".join(str(x) for x in elems))
    return PASS


def cmd_field_table(args) -> int:
    gf = parse_field(args.field)
    add = [[gf.add(a, b) for b in range(gf.s)] for a in range(gf.s)]
    mul = [[gf.mul(a, b) for b in range(gf.s)] for a in range(gf.s)]
    if args.json:
        _emit({"s": gf.s, "add": add, "mul": mul}, True)
    else:
        print(f"GF({gf.s}) addition:")
        for row in add:
            print("  " + " ".join(f"{x:3d}" for x in row))
        print(f"GF({gf.s}) multiplication:")
        for row in mul:
            print("  " + " ".join(f"{x:3d}" for x in row))
    return PASS


# ---------------------------------------------------------------------------
# oa
# ---------------------------------------------------------------------------

def cmd_oa_build(args) -> int:
    gf = parse_field(args.field)
    builder = {"U": arrays.build_U, "V": arrays.build_V, "W": arrays.build_W}
    book = builder[args.which](gf, args.t, args.m)
    if args.format == "json":
        arrays.save_codebook(book, args.out)
    else:
        arrays.save_codebook_text(book, args.out)
    _emit(book.to_json_dict() if args.verbose else
          {"rows": book.M, "m": book.m, "s": book.s, "out": args.out},
          args.json, f"wrote {args.which}: {book.M} x {book.m} over "
                     f"GF({book.s}) -> {args.out}")
    return PASS


def cmd_oa_check(args) -> int:
    book = arrays.load_codebook(args.book)
    verdict = arrays.verify_oa(book, args.t, threads=args.threads)
    _emit(verdict.to_json_dict(), args.json,
          f"orthogonal array of strength {args.t}: {verdict.ok}")
    if not verdict.ok and not args.json:
        print(json.dumps(verdict.to_json_dict(), sort_keys=True))
    return PASS if verdict.ok else FAIL


def cmd_oa_distance(args) -> int:
    book = arrays.load_codebook(args.book)
    d = arrays.min_distance(book, method=args.method)
    _emit({"d": d, "m": book.m, "rows": book.M}, args.json,
          f"minimum distance: {d}")
    return PASS


def cmd_oa_lemma1(args) -> int:
    gf = parse_field(args.field)
    report = arrays.check_lemma1_bounds(gf, args.t, args.m)
    _emit(report.to_json_dict(), args.json,
          f"coincidence maxima (U-U, V-V, U-V) = "
          f"({report.max_uu}, {report.max_vv}, {report.max_uv}) "
          f"against bounds {report.bounds}: "
          f"{'ok' if report.ok else 'VIOLATED'}")
    return PASS if report.ok else FAIL


# ---------------------------------------------------------------------------
# cw
# ---------------------------------------------------------------------------

def cmd_cw_gen(args) -> int:
    code = cwcodes.greedy_lexicode(args.q, args.d, args.w)
    if args.out:
        cwcodes.export_code(code, args.out)
    _emit(code.to_json_dict() if not args.out else
          {"N": code.N, "out": args.out}, args.json,
          f"greedy code: N = {code.N} words (q={code.q}, d={code.d}, w={code.w})"
          + (f" -> {args.out}" if args.out else ""))
    return PASS


def cmd_cw_search(args) -> int:
    code = cwcodes.stochastic_search(args.q, args.d, args.w, args.target_n,
                                     seed=args.seed, budget=args.budget)
    if args.out:
        cwcodes.export_code(code, args.out)
    _emit({"N": code.N, "target": args.target_n, "seed": args.seed,
           "reached": code.N >= args.target_n},
          args.json,
          f"search reached N = {code.N} of target {args.target_n} "
          f"(seed {args.seed}, budget {args.budget})"
          + (f" -> {args.out}" if args.out else ""))
    return PASS if code.N >= args.target_n else FAIL


def cmd_cw_verify(args) -> int:
    code = cwcodes.import_code(args.code, d=args.d, verify=False)
    verdict = cwcodes.verify_cw_code(code)
    if not verdict.ok:
        print(json.dumps(verdict.to_json_dict(), sort_keys=True))
        return FAIL
    _emit({"ok": True, "q": code.q, "w": code.w, "d": code.d, "N": code.N},
          args.json, f"valid: N={code.N} words, q={code.q}, w={code.w}, d={code.d}")
    return PASS


def cmd_cw_to_family(args) -> int:
    code = cwcodes.import_code(args.code, d=args.d)
    fam = cwcodes.family_from_code(code)
    families.save_family(fam, args.out)
    _emit({"n": fam.n, "v": fam.universe.v, "out": args.out}, args.json,
          f"wrote family: {fam.n} members over {fam.universe.v} elements "
          f"-> {args.out}")
    return PASS


# ---------------------------------------------------------------------------
# family
# ---------------------------------------------------------------------------

def cmd_family_verify(args) -> int:
    fam = families.load_family(args.family)
    if args.subfamily:
        indices = _parse_indices(args.subfamily)
        fam = fam.subfamily(indices)
    if args.mode == "sampled":
        if args.prop == "udf":
            rep = families.sample_udf(fam, args.K, args.trials, args.seed)
        else:
            rep = families.sample_cff(fam, args.K, args.trials, args.seed)
        _emit(rep.to_json_dict(), args.json,
              f"{args.prop} sampled: {rep.violations} violations "
              f"in {rep.trials} trials")
        if not rep.ok and not args.json and rep.witness:
            print(json.dumps(rep.witness.to_json_dict(), sort_keys=True))
        return PASS if rep.ok else FAIL
    check = families.is_k_udf if args.prop == "udf" else families.is_k_cff
    res = check(fam, args.K, threads=args.threads)
    _emit(res.to_json_dict(), args.json,
          f"{args.prop} (K={args.K}): {res.ok} ({res.checked} checks)")
    if not res.ok and not args.json:
        print(json.dumps(res.witness.to_json_dict(), sort_keys=True))
    return PASS if res.ok else FAIL


# ---------------------------------------------------------------------------
# acc
# ---------------------------------------------------------------------------

def cmd_acc_build_t1(args) -> int:
    book = arrays.load_codebook(args.code)
    fam = families.load_family(args.family)
    try:
        acc, cert = accs.build_theorem1_acc(book, fam, args.K, mode=args.mode,
                                            threads=args.threads)
    except accs.ConstructionRefused as exc:
        print(json.dumps(exc.certificate.to_json_dict(), sort_keys=True))
        return FAIL
    accs.save_acc(acc, args.out)
    if args.cert_out:
        accs.save_certificate(cert, args.cert_out)
    _emit(cert.to_json_dict(), args.json,
          f"built ({acc.v}, {acc.n}, {acc.K}) code -> {args.out}")
    return PASS


def cmd_acc_build_t2(args) -> int:
    book = arrays.load_codebook(args.code)
    f = families.load_family(args.family_f)
    g = families.load_family(args.family_g)
    try:
        acc, cert = accs.build_theorem2_acc(book, f, g, args.K,
                                            threads=args.threads)
    except accs.ConstructionRefused as exc:
        print(json.dumps(exc.certificate.to_json_dict(), sort_keys=True))
        return FAIL
    accs.save_acc(acc, args.out)
    if args.cert_out:
        accs.save_certificate(cert, args.cert_out)
    _emit(cert.to_json_dict(), args.json,
          f"built ({acc.v}, {acc.n}, {acc.K}) code -> {args.out}")
    return PASS


def cmd_acc_verify(args) -> int:
    acc = accs.load_acc(args.acc)
    K = args.K if args.K is not None else acc.K
    fam = accs.acc_to_family(acc)
    if args.mode == "sampled":
        if args.prop == "udf":
            rep = families.sample_udf(fam, K, args.trials, args.seed)
        else:
            rep = families.sample_cff(fam, K, args.trials, args.seed)
        _emit(rep.to_json_dict(), args.json,
              f"{args.prop} sampled: {rep.violations} violations in "
              f"{rep.trials} trials")
        return PASS if rep.ok else FAIL
    check = families.is_k_udf if args.prop == "udf" else families.is_k_cff
    res = check(fam, K, threads=args.threads)
    _emit(res.to_json_dict(), args.json,
          f"{args.prop} (K={K}): {res.ok} ({res.checked} checks)")
    if not res.ok and not args.json:
        print(json.dumps(res.witness.to_json_dict(), sort_keys=True))
    return PASS if res.ok else FAIL


def cmd_acc_compare(args) -> int:
    acc = accs.load_acc(args.acc)
    cmp = accs.compare_prior(acc, args.prior_v, args.prior_n)
    _emit(cmp.to_json_dict(), args.json,
          f"({cmp.v}, {cmp.n}, K={cmp.K}) vs prior ({cmp.prior_v}, "
          f"{cmp.prior_n}): {cmp.summary()}; exceeds block-design bound: "
          f"{cmp.exceeds_bib_bound}")
    return PASS


# ---------------------------------------------------------------------------
# attack / trace / scan
# ---------------------------------------------------------------------------

def cmd_attack(args) -> int:
    acc = accs.load_acc(args.acc)
    users = _parse_indices(args.coalition, base=1)
    fp = collusion.and_attack(acc, users)
    payload = {"fingerprint": fp.bitstring(),
               "coalition": [j + 1 for j in fp.coalition]}
    _emit(payload, args.json, fp.bitstring())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(fp.bitstring() + "\n")
    return PASS


def cmd_trace(args) -> int:
    acc = accs.load_acc(args.acc)
    if args.fp_file:
        with open(args.fp_file) as fh:
            text = fh.read().strip()
    else:
        text = args.fp
    if not text:
        raise ValueError("provide --fp or --fp-file")
    fp = collusion.Fingerprint.from_bitstring(text)
    res = collusion.trace(acc, fp, K=args.K)
    payload = res.to_json_dict()
    if res.found:
        payload["users"] = [j + 1 for j in res.users]
        payload["candidates"] = [j + 1 for j in res.candidates]
        note = " (supersets also consistent)" if res.superset_consistent else ""
        _emit(payload, args.json,
              "coalition: " + ",".join(str(j + 1) for j in res.users) + note)
        return PASS
    payload["candidates"] = [j + 1 for j in res.candidates]
    _emit(payload, args.json, f"no match: {res.reason}")
    return FAIL


def cmd_scan_remark6(args) -> int:
    gf = parse_field(args.field)
    rep = collusion.scan_remark6(gf, args.t, args.m, args.K, mode=args.mode,
                                 trials=args.trials, seed=args.seed)
    _emit(rep.to_json_dict(), args.json,
          f"W over GF({gf.s}), t={args.t}, m={args.m}, K={args.K} "
          f"[{rep.mode}]: union-distinct = {rep.ok} ({rep.note})")
    return PASS if rep.ok else FAIL


# ---------------------------------------------------------------------------
# preset
# ---------------------------------------------------------------------------

def cmd_preset_run(args) -> int:
    result = presets.run_preset(args.name, fixtures=args.fixtures,
                                out_dir=args.out_dir, threads=args.threads,
                                deep=args.deep)
    if args.json:
        print(json.dumps(result.summary, sort_keys=True))
    else:
        print(presets.format_summary(result.summary))
    return PASS


def cmd_preset_list(args) -> int:
    payload = {name: {"expected": [p.expected_v, p.expected_n, p.K],
                      "description": p.description}
               for name, p in presets.PRESETS.items()}
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for name, p in sorted(presets.PRESETS.items()):
            print(f"{name}: expected ({p.expected_v}, {p.expected_n}, {p.K})"
                  f" -- {p.description}")
    return PASS


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(sp, threads=False, seed=False):
    sp.add_argument("--json", action="store_true", help="machine output")
    if threads:
        sp.add_argument("--threads", type=int, default=1)
    if seed:
        sp.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acckit",
        description="anti-collusion fingerprinting codes: construction, "
                    "verification, and attack simulation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", help="finite field inspection")
    fsub = p.add_subparsers(dest="subcommand", required=True)
    q = fsub.add_parser("elements")
    q.add_argument("--field", required=True,
                   help="p, p^e, or p^e:c0,c1,...,ce")
    _add_common(q)
    q.set_defaults(func=cmd_field_elements)
    q = fsub.add_parser("table")
    q.add_argument("--field", required=True)
    _add_common(q)
    q.set_defaults(func=cmd_field_table)

    p = sub.add_parser("oa", help="row arrays over a field")
    osub = p.add_subparsers(dest="subcommand", required=True)
    q = osub.add_parser("build")
    q.add_argument("--field", required=True)
    q.add_argument("--t", type=int, required=True)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--which", choices=["U", "V", "W"], default="U")
    q.add_argument("--out", required=True)
    q.add_argument("--format", choices=["json", "text"], default="json")
    q.add_argument("--verbose", action="store_true")
    _add_common(q)
    q.set_defaults(func=cmd_oa_build)
    q = osub.add_parser("check")
    q.add_argument("--book", required=True)
    q.add_argument("--t", type=int, required=True)
    _add_common(q, threads=True)
    q.set_defaults(func=cmd_oa_check)
    q = osub.add_parser("distance")
    q.add_argument("--book", required=True)
    q.add_argument("--method", choices=["auto", "pairwise", "minweight"],
                   default="auto")
    _add_common(q)
    q.set_defaults(func=cmd_oa_distance)
    q = osub.add_parser("lemma1")
    q.add_argument("--field", required=True)
    q.add_argument("--t", type=int, required=True)
    q.add_argument("--m", type=int, required=True)
    _add_common(q)
    q.set_defaults(func=cmd_oa_lemma1)

    p = sub.add_parser("cw", help="constant-weight binary codes")
    csub = p.add_subparsers(dest="subcommand", required=True)
    q = csub.add_parser("gen")
    q.add_argument("--q", type=int, required=True)
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--w", type=int, required=True)
    q.add_argument("--out")
    _add_common(q)
    q.set_defaults(func=cmd_cw_gen)
    q = csub.add_parser("search")
    q.add_argument("--q", type=int, required=True)
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--w", type=int, required=True)
    q.add_argument("--target-n", type=int, required=True)
    q.add_argument("--budget", type=int, default=200_000)
    q.add_argument("--out")
    _add_common(q, seed=True)
    q.set_defaults(func=cmd_cw_search)
    q = csub.add_parser("verify")
    q.add_argument("--code", required=True)
    q.add_argument("--d", type=int, help="expected distance for bitstring files")
    _add_common(q)
    q.set_defaults(func=cmd_cw_verify)
    q = csub.add_parser("to-family")
    q.add_argument("--code", required=True)
    q.add_argument("--d", type=int)
    q.add_argument("--out", required=True)
    _add_common(q)
    q.set_defaults(func=cmd_cw_to_family)

    p = sub.add_parser("family", help="set-family verification")
    fsub = p.add_subparsers(dest="subcommand", required=True)
    q = fsub.add_parser("verify")
    q.add_argument("--family", required=True)
    q.add_argument("--prop", choices=["udf", "cff"], required=True)
    q.add_argument("--K", type=int, required=True)
    q.add_argument("--subfamily", help="0-based indices, e.g. 0-8 or 0,1,4")
    q.add_argument("--mode", choices=["exhaustive", "sampled"],
                   default="exhaustive")
    q.add_argument("--trials", type=int, default=10**6)
    _add_common(q, threads=True, seed=True)
    q.set_defaults(func=cmd_family_verify)

    p = sub.add_parser("acc", help="anti-collusion code operations")
    asub = p.add_subparsers(dest="subcommand", required=True)
    q = asub.add_parser("build-t1", help="concatenation construction")
    q.add_argument("--code", required=True)
    q.add_argument("--family", required=True)
    q.add_argument("--K", type=int, required=True)
    q.add_argument("--mode", choices=["exhaustive", "structural"],
                   default="exhaustive")
    q.add_argument("--out", required=True)
    q.add_argument("--cert-out")
    _add_common(q, threads=True)
    q.set_defaults(func=cmd_acc_build_t1)
    q = asub.add_parser("build-t2", help="augmentation construction")
    q.add_argument("--code", required=True)
    q.add_argument("--family-f", required=True)
    q.add_argument("--family-g", required=True)
    q.add_argument("--K", type=int, required=True)
    q.add_argument("--out", required=True)
    q.add_argument("--cert-out")
    _add_common(q, threads=True)
    q.set_defaults(func=cmd_acc_build_t2)
    q = asub.add_parser("verify")
    q.add_argument("--acc", required=True)
    q.add_argument("--prop", choices=["udf", "cff"], required=True)
    q.add_argument("--K", type=int)
    q.add_argument("--mode", choices=["exhaustive", "sampled"],
                   default="exhaustive")
    q.add_argument("--trials", type=int, default=10**6)
    _add_common(q, threads=True, seed=True)
    q.set_defaults(func=cmd_acc_verify)
    q = asub.add_parser("compare")
    q.add_argument("--acc", required=True)
    q.add_argument("--prior-v", type=int, required=True)
    q.add_argument("--prior-n", type=int, required=True)
    _add_common(q)
    q.set_defaults(func=cmd_acc_compare)

    p = sub.add_parser("attack", help="bitwise-AND collusion attack")
    p.add_argument("--acc", required=True)
    p.add_argument("--coalition", required=True,
                   help="1-based user ids, e.g. 2,5")
    p.add_argument("--out", help="write the fingerprint to a file")
    _add_common(p)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("trace", help="recover the coalition behind a fingerprint")
    p.add_argument("--acc", required=True)
    p.add_argument("--fp", help="fingerprint bitstring")
    p.add_argument("--fp-file", help="file containing the bitstring")
    p.add_argument("--K", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("scan-remark6",
                       help="empirical union-distinctness scan of the "
                            "stacked array beyond K = 2")
    p.add_argument("--field", required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--mode", choices=["exhaustive", "sampled"],
                   default="exhaustive")
    p.add_argument("--trials", type=int, default=10**6)
    _add_common(p, seed=True)
    p.set_defaults(func=cmd_scan_remark6)

    p = sub.add_parser("preset", help="canonical end-to-end pipelines")
    psub = p.add_subparsers(dest="subcommand", required=True)
    q = psub.add_parser("run")
    q.add_argument("name", choices=sorted(presets.PRESETS))
    q.add_argument("--fixtures", help="fixture directory override")
    q.add_argument("--out-dir", help="write code/certificate/summary files")
    q.add_argument("--deep", action="store_true",
                   help="include long-running exhaustive output checks")
    _add_common(q, threads=True)
    q.set_defaults(func=cmd_preset_run)
    q = psub.add_parser("list")
    _add_common(q)
    q.set_defaults(func=cmd_preset_list)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FieldError, arrays.ParameterError, families.FamilyError,
            cwcodes.CodeError, accs.ConstructionError,
            collusion.CollusionError, presets.FixtureMissing,
            FileNotFoundError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except presets.PresetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":
    raise SystemExit(main())
