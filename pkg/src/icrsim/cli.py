"""Command-line front end.

    icrsim classify  --pattern DD,PN,NP
    icrsim enumerate --out atlas.csv
    icrsim simulate  --scheme scheme2 --seed 3 --noise 0.01
    icrsim dof-sweep --scheme tdm --trials 2000 --powers 20,25,30,35,40
    icrsim demo

Exit codes: 0 success, 1 file I/O failure, 2 invalid arguments,
3 numeric failure (singular systems beyond the redraw budget).
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from . import reports
from .classifier import classify, enumerate_patterns
from .csit import CsitPattern, PatternSyntaxError
from .decoder import SingularSystemError
from .dof import RedrawBudgetExceeded, estimate_dof
from .lab import demo_text, simulate_trial
from .schemes import CsitAccessError, PatternMismatchError, SchemeId, select_scheme

log = logging.getLogger("icrsim")

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_NUMERIC = 0, 1, 2, 3
COMMANDS = ("classify", "simulate", "dof-sweep", "enumerate", "demo")
DEFAULT_LOG2_POWERS = (20.0, 25.0, 30.0, 35.0, 40.0)


class ValidationError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    pattern: CsitPattern | None = None
    scheme: SchemeId | None = None
    seed: int = 0
    trials: int = 2000
    log2_powers: tuple[float, ...] = DEFAULT_LOG2_POWERS
    noise_power: float = 0.0
    out: Path | None = None
    format: str = "csv"
    timestamp: bool = True

    @property
    def powers(self) -> list[float]:
        return [2.0 ** k for k in self.log2_powers]

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if self.seed < 0:
            raise ValidationError("--seed must be a non-negative integer")
        if self.trials < 1:
            raise ValidationError("--trials must be positive")
        if self.noise_power < 0:
            raise ValidationError("--noise must be non-negative")
        if self.format not in ("csv", "json"):
            raise ValidationError("--format must be csv or json")
        if self.command == "classify" and self.pattern is None:
            raise ValidationError("classify needs --pattern")
        if self.command in ("simulate", "dof-sweep"):
            if self.scheme is None and self.pattern is None:
                raise ValidationError(f"{self.command} needs --scheme or --pattern")
            if self.scheme is None:
                match = select_scheme(self.pattern)
                if match is None:
                    raise ValidationError(
                        f"pattern ({self.pattern}) dominates no minimal synergistic pattern; "
                        "pass --scheme tdm for the baseline"
                    )
                self.scheme = match.scheme
        if self.command == "dof-sweep":
            if len(self.log2_powers) < 2 or len(set(self.log2_powers)) != len(self.log2_powers):
                raise ValidationError("--powers needs at least two distinct values")
            if any(k <= 0 for k in self.log2_powers):
                raise ValidationError("--powers are log2 values and must be positive")
        return self


def _parse_pattern(text: str) -> CsitPattern:
    try:
        return CsitPattern.parse(text)
    except PatternSyntaxError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_scheme(text: str) -> SchemeId:
    try:
        return SchemeId.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_powers(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"--powers takes comma separated log2 values, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pattern", type=_parse_pattern, help='CSIT pattern such as "DD,PN,NP"')
    common.add_argument("--scheme", type=_parse_scheme, help="scheme1[m], scheme2[m], scheme3[m] or tdm")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=2000, help="Monte Carlo trials per power")
    common.add_argument("--powers", type=_parse_powers, default=DEFAULT_LOG2_POWERS,
                        help="comma separated log2 P values (default 20,25,30,35,40)")
    common.add_argument("--noise", type=float, default=0.0, help="noise power for simulate; symbols then carry the first --powers value")
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--no-timestamp", action="store_true", help="omit the generated-at header")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="icrsim", description="ICR schemes for the X-channel with alternating CSIT")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "classify": "classify one CSIT pattern",
        "simulate": "trace one end-to-end block",
        "dof-sweep": "sum-rate sweep and DoF slope fit",
        "enumerate": "classify all 729 patterns",
        "demo": "walk through Schemes 1-3 slot by slot",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def config_from_args(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    return RunConfig(
        command=args.command,
        pattern=args.pattern,
        scheme=args.scheme,
        seed=args.seed,
        trials=args.trials,
        log2_powers=args.powers,
        noise_power=args.noise,
        out=args.out,
        format=args.format,
        timestamp=not args.no_timestamp,
    )


def _report(config: RunConfig) -> tuple[str, str]:
    """Report text and a one-line summary for ``config``."""
    gen = reports.timestamp() if config.timestamp else None
    json_out = config.format == "json"
    if config.command == "classify":
        r = classify(config.pattern)
        scheme = r.assigned_scheme.label if r.assigned_scheme else "-"
        summary = f"{r.pattern}: {r.verdict.value} scheme={scheme}"
        if json_out:
            return reports.emit_atlas_json([r], generated=gen), summary
        return reports.emit_atlas_csv([r], generated=gen), summary
    if config.command == "enumerate":
        atlas = enumerate_patterns()
        s = atlas.summary()
        summary = (f"{s['counts']['total']} patterns, {s['counts']['synergistic']} synergistic, "
                   f"{s['counts']['disagree']} disagreements")
        if json_out:
            return reports.emit_atlas_json(atlas.reports, s, generated=gen), summary
        return reports.emit_atlas_csv(atlas.reports, generated=gen), summary
    if config.command == "dof-sweep":
        log.info("sweeping %s over %d powers, %d trials each", config.scheme.value,
                 len(config.log2_powers), config.trials)
        est = estimate_dof(config.scheme, config.powers, config.trials, config.seed, config.pattern)
        summary = f"{config.scheme.label}: slope={est.slope:.4f} intercept={est.intercept:.4f}"
        if json_out:
            return reports.emit_sweep_json(est, generated=gen), summary
        return reports.emit_sweep_csv(est, generated=gen), summary
    if config.command == "simulate":
        P = 2.0 ** config.log2_powers[0] if config.noise_power > 0 else None
        trace = simulate_trial(config.scheme, config.seed, config.pattern, config.noise_power, P)
        residual = trace["values"][-1][2].real
        summary = f"{config.scheme.label}: max residual {residual:.3e}"
        if json_out:
            return reports.emit_trace_json(trace, generated=gen), summary
        return reports.emit_trace_csv(trace, generated=gen), summary
    # demo
    text = demo_text(config.seed)
    if gen is not None:
        text = f"# generated: {gen}\n" + text
    return text, "demo written"


def run(config: RunConfig) -> int:
    try:
        config.validate()
        text, summary = _report(config)
    except (ValidationError, PatternSyntaxError, PatternMismatchError, CsitAccessError) as exc:
        print(f"icrsim: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SingularSystemError, RedrawBudgetExceeded) as exc:
        print(f"icrsim: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if config.out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        config.out.write_text(text)
    except OSError as exc:
        print(f"icrsim: cannot write {config.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(summary)
    return EXIT_OK


def main(argv=None) -> int:
    return run(config_from_args(argv))


if __name__ == "__main__":
    sys.exit(main())
