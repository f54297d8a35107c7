import io

from django.core.management.base import BaseCommand, CommandError

from core.exceptions import ZetaLabError
from experiments.config import RunConfig
from experiments.dispatch import execute
from experiments.outputs import FORMATS

RUN_OPTIONS = {"set", "config", "workers", "seed", "output", "format", "backend", "no_record"}
DJANGO_OPTIONS = {
    "verbosity",
    "settings",
    "pythonpath",
    "traceback",
    "no_color",
    "force_color",
    "skip_checks",
    "stdout",
    "stderr",
    "subcommand",
}


def _run_options(parser):
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="Override a numerical setting")
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--workers", type=int, help="Worker processes")
    parser.add_argument("--seed", type=int, help="Seed for randomized points")
    parser.add_argument("--output", "-o", help="Output file (default stdout)")
    parser.add_argument("--format", choices=FORMATS, help="Output format override")
    parser.add_argument("--backend", choices=["local", "celery"], help="Where grid points run")
    parser.add_argument("--no-record", action="store_true", help="Do not write the run journal")


def _function_options(parser):
    parser.add_argument("--expr", help="Composition over zeta, e.g. \"D0*D2 - D1^2\"")
    parser.add_argument("--entry", help="Gallery entry instead of an expression")
    parser.add_argument("--param", action="append", default=[], metavar="KEY=VALUE", help="Gallery entry parameter")


def _target_options(parser):
    parser.add_argument("--target", choices=["monomial", "poly"], default="monomial")
    parser.add_argument("--alpha", help="Target zero (complex); 'auto' for the poly target")
    parser.add_argument("--k", type=int, help="Derivative order of the monomial target")
    parser.add_argument("--radius", type=float, help="Disk radius")
    parser.add_argument("--samples", type=int, help="Initial circle samples")


class Command(BaseCommand):
    help = "Zeros of polynomials in derivatives of zeta functions: evaluation, counting, Rouche scans"

    def add_arguments(self, parser):
        sub = parser.add_subparsers(dest="subcommand", required=True)

        p = sub.add_parser("eval", help="Evaluate a function at points")
        _function_options(p)
        p.add_argument("--at", help="Points separated by ';'")
        p.add_argument("--random", type=int, help="Number of seeded random points in --rect")
        p.add_argument("--rect", help="sigma_min,sigma_max,t_min,t_max")
        p.add_argument("--derivative", type=int, help="Derivative order")
        _run_options(p)

        p = sub.add_parser("count", help="Count zeros in a rectangle")
        _function_options(p)
        p.add_argument("--rect", help="sigma_min,sigma_max,t_min,t_max")
        p.add_argument("--localize", action="store_true", help="Also locate the zeros")
        _run_options(p)

        p = sub.add_parser("sweep", help="Zero counts over a grid of heights")
        _function_options(p)
        p.add_argument("--strip", help="sigma_1,sigma_2")
        p.add_argument("--T", help="Comma-separated heights")
        p.add_argument("--t-min", type=float, help="Lower edge of every rectangle")
        _run_options(p)

        p = sub.add_parser("rouche-demo", help="One Rouche certificate")
        _function_options(p)
        _target_options(p)
        p.add_argument("--tau", type=float, help="Shift")
        _run_options(p)

        p = sub.add_parser("tau-scan", help="Rouche certificates over a grid of shifts")
        _function_options(p)
        _target_options(p)
        p.add_argument("--tau-range", help="tau_0,tau_1")
        p.add_argument("--step", type=float, help="Grid step")
        p.add_argument("--checkpoint", type=int, help="Flush the JSON-lines output every N shifts")
        p.add_argument("--resume", action="store_true", help="Skip shifts already in --output")
        _run_options(p)

        p = sub.add_parser("lemma-solve", help="Jet logarithm, or the theta equation of a polynomial")
        p.add_argument("--jet", help="c_0,c_1,...")
        _function_options(p)
        p.add_argument("--alpha", help="Point for the theta equation")
        _run_options(p)

        p = sub.add_parser("meanvalue", help="(1/T) integral of |f(sigma+it)|^2")
        _function_options(p)
        p.add_argument("--sigma", type=float)
        p.add_argument("--T", type=float)
        p.add_argument("--t-min", type=float)
        _run_options(p)

        p = sub.add_parser("ingham", help="Mean of zeta^(u)(eta+it) zeta^(v)(theta-it)")
        for name in ("--u", "--v"):
            p.add_argument(name, type=int)
        for name in ("--eta", "--theta", "--T"):
            p.add_argument(name, type=float)
        _run_options(p)

        p = sub.add_parser("berndt", help="Zero counts of zeta^(k) against the main term")
        p.add_argument("--k", type=int)
        p.add_argument("--T", type=float)
        p.add_argument("--speiser", action="store_true", help="Count in (0, sigma_max) instead")
        p.add_argument("--sigma-max", type=float)
        p.add_argument("--weighted", action="store_true", help="Weighted sum over the zeros")
        _run_options(p)

        p = sub.add_parser("align", help="Shifts aligning tau*lambda/(2 pi M) with integers")
        p.add_argument("--lambdas", help="Comma-separated exponents")
        p.add_argument("--M", type=int)
        p.add_argument("--delta", type=float)
        p.add_argument("--tau-range")
        p.add_argument("--step", type=float)
        _run_options(p)

        p = sub.add_parser("gallery", help="Gallery of zeta-type functions")
        p.add_argument("action", nargs="?", default="list", choices=["list", "describe", "check", "smoke", "remark1", "stopple"])
        p.add_argument("name", nargs="?")
        p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
        p.add_argument("--tau", help="Comma-separated shifts for remark1")
        p.add_argument("--radius", type=float, help="Disk radius for remark1")
        p.add_argument("--T", help="Comma-separated heights for stopple")
        _run_options(p)

        p = sub.add_parser("runs", help="Recent runs from the journal")
        p.add_argument("--filter", help="Only this subcommand")
        p.add_argument("--limit", type=int)
        _run_options(p)

    def handle(self, *args, **options):
        command = options["subcommand"]
        params = {
            key: value
            for key, value in options.items()
            if key not in RUN_OPTIONS | DJANGO_OPTIONS and not (value is None or value is False or value == [])
        }
        try:
            config = RunConfig.resolve(
                command,
                params=params,
                config_file=options.get("config"),
                assignments=options.get("set") or [],
                flags={
                    "workers": options.get("workers"),
                    "seed": options.get("seed"),
                    "output": options.get("output"),
                    "format": options.get("format"),
                    "backend": options.get("backend"),
                    "record": False if options.get("no_record") else None,
                },
            )
            buffer = io.StringIO()
            artifact = execute(config, buffer)
        except ZetaLabError as exc:
            raise CommandError(f"{exc.__class__.__name__}: {exc}", returncode=exc.exit_code)

        if buffer.getvalue():
            self.stdout.write(buffer.getvalue(), ending="")
        if config.output and config.output != "-":
            self.stdout.write(self.style.SUCCESS(f"{command}: wrote {config.output} {artifact.summary}"))
