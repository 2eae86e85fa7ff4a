"""Command-line front end.

Exit codes: 0 success / all checks pass, 1 input or parse error, 2 a check
failed (diagnostics or a witness was produced), 3 a search ran out of budget.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import fixtures
from .axioms import (
    VerifyConfig,
    check_anonymity,
    check_range_unanimity,
    search_manipulation,
    signature_accept,
    verify,
)
from .errors import SuvoteError
from .events import Dipartition, FilterSeq, brute_force_decomposition, \
    maximal_decomposition, validate_filter
from .factors import FilteringFactor, QuotaTable, is_iso_filtering
from .mechanism import Mechanism, evaluation_json, validate_mechanism
from .model import Profile, StateSpace, gen_profile
from .specfmt import parse, serialize

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_FAIL = 2
EXIT_BUDGET = 3


def _load_mechanism(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return None
    result = parse(text)
    if not result.ok:
        for err in result.errors:
            print(f"parse error: {err}", file=sys.stderr)
        return None
    return result.mechanism


def _emit(data, as_json: bool) -> None:
    if as_json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(json.dumps(data, indent=2, sort_keys=True))


def cmd_validate(args) -> int:
    mech = _load_mechanism(args.spec)
    if mech is None:
        return EXIT_INPUT
    diags = validate_mechanism(mech)
    if diags:
        for d in diags:
            print(f"invalid: {d}")
        return EXIT_FAIL
    print("ok")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    mech = _load_mechanism(args.spec)
    if mech is None:
        return EXIT_INPUT
    diags = validate_mechanism(mech)
    if diags:
        for d in diags:
            print(f"invalid: {d}", file=sys.stderr)
        return EXIT_FAIL
    try:
        with open(args.profile, "r", encoding="utf-8") as handle:
            profile = Profile.from_json(json.load(handle))
    except (OSError, ValueError, KeyError, SuvoteError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    _emit(evaluation_json(mech, profile), args.json)
    return EXIT_OK


def _verify_exit(report) -> int:
    if report.exhausted:
        return EXIT_BUDGET
    return EXIT_OK if report.all_pass else EXIT_FAIL


def cmd_verify(args) -> int:
    mech = _load_mechanism(args.spec)
    if mech is None:
        return EXIT_INPUT
    diags = validate_mechanism(mech)
    if diags:
        for d in diags:
            print(f"invalid: {d}", file=sys.stderr)
        return EXIT_FAIL
    config = VerifyConfig(
        seed=args.seed,
        anonymity_profiles=args.anonymity_profiles,
        unanimity_trials=args.trials,
        manipulation_profiles=args.profiles,
        manipulation_budget=args.budget,
        mode="exhaustive" if args.exhaustive else "sampled",
    )
    report = verify(mech, config)
    _emit(report.to_json(), args.json)
    return _verify_exit(report)


def cmd_search(args) -> int:
    mech = _load_mechanism(args.spec)
    if mech is None:
        return EXIT_INPUT
    if args.exhaustive:
        result = search_manipulation(mech, mode="exhaustive",
                                     budget=args.budget, seed=args.seed)
    else:
        accept = signature_accept(mech)
        profiles = [gen_profile(mech.n, mech.space, mech.outcomes, 1000,
                                args.seed + i, accept=accept)
                    for i in range(args.profiles)]
        result = search_manipulation(mech, profiles, mode="sampled",
                                     budget=args.budget, seed=args.seed,
                                     jobs=args.jobs)
    if result.verdict == "witness":
        _emit(result.to_json(), args.json)
        return EXIT_FAIL
    if result.verdict == "exhausted-budget":
        _emit(result.to_json(), args.json)
        return EXIT_BUDGET
    print(json.dumps({"verdict": "none", "work_units": result.work_units})
          if args.json else "none")
    return EXIT_OK


def cmd_decompose(args) -> int:
    try:
        with open(args.events, "r", encoding="utf-8") as handle:
            data = json.load(handle)
        space = StateSpace(tuple(data["states"]))
        collection = [space.event(labels) for labels in data["events"]]
        decomp = maximal_decomposition(collection)
        if args.oracle:
            oracle = brute_force_decomposition(collection)
            if oracle != decomp:
                print("error: oracle disagreement", file=sys.stderr)
                return EXIT_FAIL
    except (OSError, ValueError, KeyError, SuvoteError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    _emit(decomp.to_json(), args.json)
    return EXIT_OK


def _filter_from_json(data: dict) -> tuple[FilterSeq, QuotaTable | None]:
    space = StateSpace(tuple(data["states"]))
    cell = space.event(data.get("cell", data["states"]))
    levels = []
    quota_rows = []
    have_quotas = True
    for level in data["levels"]:
        pairs = tuple((space.event(e), space.event(f)) for e, f in level["pairs"])
        residual = (space.event(level.get("Ga", [])),
                    space.event(level.get("Gb", [])))
        levels.append(Dipartition(cell, pairs, residual))
        if "quotas" in level:
            quota_rows.append(tuple((int(t), int(h)) for t, h in level["quotas"]))
        else:
            have_quotas = False
    k_lo, k_hi = int(data["klo"]), int(data["khi"])
    filt = FilterSeq(cell, k_lo, k_hi, tuple(levels))
    quotas = QuotaTable(k_lo, k_hi, tuple(quota_rows)) if have_quotas else None
    return filt, quotas


def cmd_filter_check(args) -> int:
    path = args.input
    findings: list[dict] = []
    ok = True
    if path.endswith(".scf"):
        mech = _load_mechanism(path)
        if mech is None:
            return EXIT_INPUT
        targets = [(cell.name, cell.factor) for cell in mech.cells
                   if cell.factor.kind == "filtering"]
        if not targets:
            print("no filtering factors in the spec", file=sys.stderr)
            return EXIT_INPUT
        for name, factor in targets:
            diags = validate_filter(factor.filter)
            iso = is_iso_filtering(factor) if not diags else []
            findings.append({
                "cell": name,
                "filter": [str(d) for d in diags],
                "iso_filtering": [str(d) for d in iso],
            })
            ok = ok and not diags and not iso
    else:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                filt, quotas = _filter_from_json(json.load(handle))
        except (OSError, ValueError, KeyError, SuvoteError) as err:
            print(f"error: {err}", file=sys.stderr)
            return EXIT_INPUT
        diags = validate_filter(filt)
        iso: list = []
        if quotas is not None and not diags:
            factor = FilteringFactor(filt.cell, 0, 1, filt, quotas)
            iso = is_iso_filtering(factor)
        findings.append({
            "filter": [str(d) for d in diags],
            "iso_filtering": [str(d) for d in iso],
        })
        ok = not diags and not iso
    _emit({"ok": ok, "findings": findings}, args.json)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_demo(args) -> int:
    name = args.name
    if name not in fixtures.DEMO_NAMES:
        print(f"error: unknown demo {name!r}; choices: "
              f"{', '.join(fixtures.DEMO_NAMES)}", file=sys.stderr)
        return EXIT_INPUT
    mech = fixtures.demo_mechanism(name)
    out: dict = {"demo": name}

    if name == "majority-fixture":
        profiles = fixtures.majority_unanimous_profiles()
        anon = check_anonymity(mech, profiles)
        unanim = check_range_unanimity(mech, 0, args.seed,
                                       extra_profiles=profiles)
        out["anonymity"] = anon.verdict
        out["range_unanimity"] = unanim.verdict
        if unanim.witness is not None:
            out["witness"] = unanim.witness.to_json()
        _emit(out, args.json)
        return EXIT_OK if anon.verdict == "pass" and unanim.verdict == "fail" \
            else EXIT_FAIL

    diags = validate_mechanism(mech)
    out["valid"] = not diags
    out["spec"] = serialize(mech)
    for cell in mech.cells:
        if cell.factor.kind == "filtering":
            iso = is_iso_filtering(cell.factor)
            out.setdefault("iso_filtering", {})[cell.name] = \
                "ok" if not iso else [str(d) for d in iso]
    accept = signature_accept(mech)
    profile = gen_profile(mech.n, mech.space, mech.outcomes, 1000, args.seed,
                          accept=accept)
    out["sample_evaluation"] = evaluation_json(mech, profile)
    if name == "example3":
        result = search_manipulation(
            mech, [fixtures.example3_witness_profile()],
            mode="sampled", budget=1000, seed=args.seed)
        out["manipulation"] = result.to_json()
        _emit(out, args.json)
        return EXIT_OK if result.verdict == "witness" else EXIT_FAIL
    if name == "example2" or name == "example4ii":
        result = search_manipulation(mech, mode="exhaustive",
                                     budget=100_000, seed=args.seed)
        out["manipulation"] = result.to_json()
    else:
        profiles = [gen_profile(mech.n, mech.space, mech.outcomes, 1000,
                                args.seed + i, accept=accept) for i in range(20)]
        result = search_manipulation(mech, profiles, mode="sampled",
                                     budget=10_000, seed=args.seed)
        out["manipulation"] = result.to_json()
    _emit(out, args.json)
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="suvote",
        description="Build, evaluate, and verify anonymous strategy-proof "
                    "voting mechanisms over subjective expected utility "
                    "preferences.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and structurally validate a spec")
    p.add_argument("spec")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("evaluate", help="evaluate a spec on a profile")
    p.add_argument("spec")
    p.add_argument("profile")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("verify", help="run the axiom verification harness")
    p.add_argument("spec")
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--profiles", type=int, default=100)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--anonymity-profiles", type=int, default=50)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="search for a manipulation witness")
    p.add_argument("spec")
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--profiles", type=int, default=100)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("decompose", help="maximal decomposition of an event file")
    p.add_argument("events")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against the brute-force oracle")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("filter-check",
                       help="filter validity and iso-filtering diagnostics")
    p.add_argument("input", help=".scf spec or filter .json file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_filter_check)

    p = sub.add_parser("demo", help="run a built-in fixture end to end")
    p.add_argument("name", choices=fixtures.DEMO_NAMES)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_demo)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SuvoteError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
