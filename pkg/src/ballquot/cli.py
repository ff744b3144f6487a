#
# Copyright © 2024 Mark Raynsford <code@io7m.com> https://www.io7m.com
#
# Permission to use, copy, modify, and/or distribute this software for any
# purpose with or without fee is hereby granted, provided that the above
# copyright notice and this permission notice appear in all copies.
#
# THE SOFTWARE IS PROVIDED "AS IS" AND THE AUTHOR DISCLAIMS ALL WARRANTIES
# WITH REGARD TO THIS SOFTWARE INCLUDING ALL IMPLIED WARRANTIES OF
# MERCHANTABILITY AND FITNESS. IN NO EVENT SHALL THE AUTHOR BE LIABLE FOR ANY
# SPECIAL, DIRECT, INDIRECT, OR CONSEQUENTIAL DAMAGES OR ANY DAMAGES
# WHATSOEVER RESULTING FROM LOSS OF USE, DATA OR PROFITS, WHETHER IN AN
# ACTION OF CONTRACT, NEGLIGENCE OR OTHER TORTIOUS ACTION, ARISING OUT OF OR
# IN CONNECTION WITH THE USE OR PERFORMANCE OF THIS SOFTWARE.
#

"""
The ballquot command line. Every command produces a report on stdout in
the configured format; logging goes to stderr. Exit codes: 0 when every
check passes, 1 when a check fails, 2 on usage or data errors.
"""

import argparse
import json
import logging
import os
import sys
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path

from lxml.etree import XMLSyntaxError

from ballquot.__about__ import __version__
from ballquot.config import (
    OutputFormat,
    RunConfig,
    resolve_config,
)
from ballquot.covolume import (
    TARGET_EULER,
    DiscriminantBounds,
    FieldCatalog,
    Verdict,
    field_bound_cascade,
    reproduce_table2,
    run_full_search,
)
from ballquot.dmorbifold import (
    ORBIFOLD_STRATA,
    BallTuple,
    check_int,
    check_sigma_int,
    invariant_conversions,
    orbifold_euler,
    triangle_orbifold,
    triangle_stratification,
)
from ballquot.finitegrp import cycle_notation, target, target_names
from ballquot.fpgroup import (
    CosetOverflowError,
    SearchBudgetExhausted,
    abelian_quotient_count,
    abelianization,
    find_gamma_epimorphisms,
    quotient_survey,
    todd_coxeter,
)
from ballquot.model import DataError, Provenance
from ballquot.papercheck import (
    cmd_constants,
    cmd_paper_check,
    load_witnesses,
    table1_results,
    table2_results,
)
from ballquot.report import CheckResult, CheckStatus, Report
from ballquot.words import g10, gamma, parse_word
from ballquot.xml import load_discriminant_bounds, load_fields

log = logging.getLogger(__name__)


def _info(name: str, observed: object, **detail: object) -> CheckResult:
    return CheckResult(
        name,
        CheckStatus.INFO,
        Provenance.DERIVED,
        "",
        str(observed),
        dict(detail),
    )


def _bounds(args: argparse.Namespace, config: RunConfig) -> Report:
    report = Report(args.argv, config.to_json())
    if args.table == 1:
        for r in table1_results(config.precision):
            report.add(r)
    else:
        bounds = DiscriminantBounds(load_discriminant_bounds(config.data_dir))
        for r in table2_results(bounds, config.precision):
            report.add(r)
    return report


def _search(args: argparse.Namespace, config: RunConfig) -> Report:
    report = Report(args.argv, config.to_json())
    catalog = FieldCatalog(load_fields(config.data_dir))
    bounds = DiscriminantBounds(load_discriminant_bounds(config.data_dir))

    if args.degree is not None:
        table2 = reproduce_table2(bounds, config.precision)
        for c in field_bound_cascade(args.degree, catalog, bounds, table2):
            status = (
                CheckStatus.FAIL
                if c.verdict == Verdict.INDETERMINATE
                else CheckStatus.INFO
            )
            name = f"n{c.degree}." + (
                "cap"
                if c.candidate is None
                else "-".join(map(str, c.candidate))
            )
            report.add(
                CheckResult(
                    name,
                    status,
                    Provenance.DERIVED,
                    "",
                    c.verdict.name,
                    c.to_json(),
                )
            )
        return report

    result = run_full_search(catalog, bounds, eps=config.precision)
    if args.json is not None:
        args.json.write_text(
            json.dumps(result.to_json(), indent=2, sort_keys=True),
            encoding="utf-8",
        )
    report.add(
        CheckResult.compare(
            "survivors", Provenance.PAPER, [(12, 144)], list(result.survivors)
        )
    )
    report.add(
        CheckResult.compare(
            "minimal-euler",
            Provenance.PAPER,
            TARGET_EULER,
            result.minimal_euler,
            {"alternatives": result.alternatives()},
        )
    )
    report.add(_info("certificates", len(result.certificates)))
    return report


def _dm(args: argparse.Namespace, config: RunConfig) -> Report:
    report = Report(args.argv, config.to_json())
    match args.dm_command:
        case "check":
            t = BallTuple.parse(args.tuple)
            for name, result in (
                ("int", check_int(t)),
                ("sigma-int", check_sigma_int(t)),
            ):
                report.add(
                    _info(name, result.satisfied, **result.to_json())
                )
        case "euler":
            report.add(
                CheckResult.compare(
                    "orbifold-euler",
                    Provenance.PAPER,
                    TARGET_EULER,
                    orbifold_euler(ORBIFOLD_STRATA),
                    {"strata": ORBIFOLD_STRATA.to_json()},
                )
            )
        case "triangle":
            t = BallTuple.parse(args.tuple)
            triangle = triangle_orbifold(t)
            report.add(_info("triangle", triangle.valid, **triangle.to_json()))
            if all(r.denominator == 1 and r > 1 for r in triangle.r):
                sphere = triangle_stratification([int(r) for r in triangle.r])
                report.add(_info("sphere-euler", orbifold_euler(sphere)))
    return report


def _homsearch(report: Report, name: str, config: RunConfig) -> None:
    try:
        maps = find_gamma_epimorphisms(
            target(name), config.relator_variant, config.hom_search_budget
        )
    except SearchBudgetExhausted as e:
        report.add(
            CheckResult(
                f"homsearch.{name}",
                CheckStatus.FAIL,
                Provenance.TRIVIAL,
                "search completes",
                str(e),
            )
        )
        return
    report.add(_info(f"homsearch.{name}", len(maps)))
    for k, m in enumerate(maps):
        report.add(
            _info(f"homsearch.{name}.{k}", m.image_order(), **m.to_json())
        )


def _group(args: argparse.Namespace, config: RunConfig) -> Report:
    report = Report(args.argv, config.to_json())
    variant = config.relator_variant
    match args.group_command:
        case "abelianize":
            invariants = abelianization(gamma(variant))
            report.add(
                CheckResult.compare(
                    "abelianization", Provenance.PAPER, [3], invariants
                )
            )
            report.add(
                CheckResult.compare(
                    "z3-quotients",
                    Provenance.PAPER,
                    1,
                    abelian_quotient_count(invariants, 3),
                )
            )
        case "tc":
            p = g10() if args.presentation == "g10" else gamma(variant)
            subgroup = [
                parse_word(w, p.names) for w in args.subgroup.split(",") if w
            ]
            max_cosets = args.tc_max_cosets or config.max_cosets
            try:
                table = todd_coxeter(p, subgroup, max_cosets)
                report.add(_info("index", table.index))
            except CosetOverflowError as e:
                report.add(_info("index", f"overflow above {e.limit} cosets"))
        case "homsearch":
            _homsearch(report, args.target, config)
        case "verify-s1":
            return cmd_paper_check(
                config, args.argv, ["g10", "verify-s1", "frobenius21"]
            )
        case "verify-s2":
            return cmd_paper_check(
                config, args.argv, ["verify-s1", "verify-s2"]
            )
        case "target":
            names = list(target_names()) if args.list or not args.name else []
            for name in names:
                report.add(_info(f"target.{name}", target(name).order()))
            if args.name:
                group = target(args.name)
                report.add(
                    _info(
                        f"target.{group.name}",
                        group.order(),
                        degree=group.degree,
                        generators=[
                            cycle_notation(g) for g in group.generators
                        ],
                    )
                )
        case "survey":
            entries = quotient_survey(
                gamma(variant),
                config.max_index,
                load_witnesses(config),
                budget=config.hom_search_budget,
            )
            for entry in entries:
                report.add(
                    _info(
                        f"survey.{entry.target}",
                        entry.classes,
                        **entry.to_json(),
                    )
                )
    return report


def _surface(args: argparse.Namespace, config: RunConfig) -> Report:
    report = Report(args.argv, config.to_json())
    e = Fraction(args.euler)
    inv = invariant_conversions(e, config.precision)
    report.add(_info("surface", e, **inv.to_json()))
    report.add(_info("index", e / TARGET_EULER))
    return report


def _paper_check(args: argparse.Namespace, config: RunConfig) -> Report:
    return cmd_paper_check(config, args.argv)


def _constants(args: argparse.Namespace, config: RunConfig) -> Report:
    return cmd_constants(config, args.argv)


def parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ballquot",
        description="Verify the minimal-volume arithmetic ball quotient.",
    )
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--config", type=Path, help="A TOML configuration file.")
    p.add_argument("--data-dir", type=Path, help="A directory of data files.")
    p.add_argument(
        "--format", choices=[f.value for f in OutputFormat], default=None
    )
    p.add_argument("--precision", help="Interval precision, e.g. 1/1000000.")
    p.add_argument("--max-cosets", type=int)
    p.add_argument("--budget", type=int, help="Homomorphism search budget.")
    p.add_argument(
        "--relator-variant", choices=["presentation", "proposition"]
    )
    p.add_argument("-v", "--verbose", action="count", default=0)

    sub = p.add_subparsers(dest="command", required=True)

    bounds = sub.add_parser("bounds", help="Reproduce the bound tables.")
    bounds.add_argument("--table", type=int, choices=[1, 2], default=1)
    bounds.set_defaults(run=_bounds)

    search = sub.add_parser("search", help="Run the field search.")
    search.add_argument("--degree", type=int)
    search.add_argument("--json", type=Path, help="Write the search report.")
    search.set_defaults(run=_search)

    dm = sub.add_parser("dm", help="Ball tuples and orbifold strata.")
    dm_sub = dm.add_subparsers(dest="dm_command", required=True)
    dm_check = dm_sub.add_parser("check")
    dm_check.add_argument("tuple")
    dm_sub.add_parser("euler")
    dm_triangle = dm_sub.add_parser("triangle")
    dm_triangle.add_argument("tuple")
    dm.set_defaults(run=_dm)

    group = sub.add_parser("group", help="Finitely presented groups.")
    group_sub = group.add_subparsers(dest="group_command", required=True)
    group_sub.add_parser("abelianize")
    tc = group_sub.add_parser("tc")
    tc.add_argument("--presentation", choices=["gamma", "g10"], default="gamma")
    tc.add_argument("--subgroup", default="")
    tc.add_argument("--max-cosets", type=int, dest="tc_max_cosets")
    homsearch = group_sub.add_parser("homsearch")
    homsearch.add_argument("--target", required=True)
    group_sub.add_parser("verify-s1")
    group_sub.add_parser("verify-s2")
    targets = group_sub.add_parser("target")
    targets.add_argument("name", nargs="?")
    targets.add_argument("--list", action="store_true")
    survey = group_sub.add_parser("survey")
    survey.add_argument("--max-index", type=int)
    group.set_defaults(run=_group)

    surface = sub.add_parser("surface", help="Surface invariants from e.")
    surface.add_argument("euler")
    surface.set_defaults(run=_surface)

    check = sub.add_parser("paper-check", help="Run every check in order.")
    check.add_argument("--stretch", action="store_true", default=None)
    check.add_argument("--stretch-deadline", type=float)
    check.set_defaults(run=_paper_check)

    constants = sub.add_parser("constants", help="Recompute the constants.")
    constants.set_defaults(run=_constants)
    return p


def _flags(args: argparse.Namespace) -> dict[str, object]:
    return {
        "precision": args.precision,
        "data_dir": args.data_dir,
        "output_format": args.format,
        "max_cosets": args.max_cosets,
        "hom_search_budget": args.budget,
        "relator_variant": args.relator_variant,
        "max_index": getattr(args, "max_index", None),
        "stretch": getattr(args, "stretch", None),
        "stretch_deadline": getattr(args, "stretch_deadline", None),
    }


def render(report: Report, output_format: OutputFormat) -> str:
    match output_format:
        case OutputFormat.JSON:
            return report.render_json() + "\n"
        case OutputFormat.CSV:
            return report.render_csv()
        case OutputFormat.HUMAN:
            return report.render_human()


def main(argv: Sequence[str] | None = None) -> int:
    arguments = list(sys.argv[1:] if argv is None else argv)
    args = parser().parse_args(arguments)
    args.argv = ["ballquot", *arguments]

    levels = {0: logging.WARNING, 1: logging.INFO}
    level = levels.get(args.verbose, logging.DEBUG)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        config = resolve_config(args.config, os.environ, _flags(args))
        report = args.run(args, config)
    except (DataError, XMLSyntaxError, OSError, ValueError) as e:
        print(f"ballquot: error: {e}", file=sys.stderr)
        return 2

    sys.stdout.write(render(report, config.output_format))
    return 1 if report.failed else 0


if __name__ == "__main__":
    sys.exit(main())
