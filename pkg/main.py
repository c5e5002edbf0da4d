"""
polyasym - Command-line entry point
Verifies the asymptotic expansions of a polylog-weighted integral and of the
coefficients of 1/(1 - Li_m(z)/zeta(m)), and emits the supporting tables
"""
import argparse
import logging
import sys
from dataclasses import dataclass, field

from mpmath import mpf

from config import (
    APP_NAME, APP_VERSION, SUBCOMMANDS, OUTPUT_FORMATS, COEFF_WEIGHTS,
    COEFF_DEFAULT_N_MAX, VERIFIED_COEFF_ORDER, ERROR_DOMAIN, ERROR_OUTPUT_FAILED
)
from modules.coeff_asymptotics import compare_table, derive_table
from modules.errors import ConfigurationError, ContractViolation, PolyAsymError
from modules.euler_sums import LINEAR, QUADRATIC, closed_form, s_pm_direct, EulerSumId
from modules.integral_expansion import (
    corollary_table, residual_table, fit_decay_order, RESIDUAL_ORDERS
)
from modules.numeric_kernel import set_precision, constants, tolerance
from modules.polylog import check_crossover, li_eval, li_inverted, li_singular_expansion
from modules.reporting import Table, emit
from modules.settings_manager import SettingsManager
from modules.verification import OracleSettings, verify_all

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


@dataclass
class RunConfig:
    subcommand: str
    precision_digits: int
    format: str = "csv"
    output_path: str = None
    tol: str = None
    jobs: int = 1
    options: dict = field(default_factory=dict)
    settings: SettingsManager = None

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigurationError(ERROR_DOMAIN.format(name="subcommand", value=self.subcommand, domain=SUBCOMMANDS))
        if self.format not in OUTPUT_FORMATS:
            raise ConfigurationError(ERROR_DOMAIN.format(name="format", value=self.format, domain=OUTPUT_FORMATS))
        if self.settings is None:
            self.settings = SettingsManager()


class PolyAsymApp:
    """Runs one subcommand and reports whether every record passed."""

    def __init__(self, config):
        self.config = config
        self.settings = config.settings
        self.handlers = {
            "constants": self.run_constants,
            "polylog": self.run_polylog,
            "eulersum": self.run_eulersum,
            "integral": self.run_integral,
            "corollary": self.run_corollary,
            "coeffs": self.run_coeffs,
            "derive": self.run_derive,
            "verify-all": self.run_verify_all,
        }

    def setup_precision(self):
        set_precision(self.config.precision_digits)
        check_crossover()
        logger.info("Working precision %d digits", self.config.precision_digits)

    def option(self, name, default=None):
        value = self.config.options.get(name)
        return default if value is None else value

    def tol(self, default):
        return mpf(self.config.tol) if self.config.tol else default

    def execute(self):
        """
        Returns:
            tuple: (Table, all_passed: bool)
        """
        self.setup_precision()
        return self.handlers[self.config.subcommand]()

    # Subcommands

    def run_constants(self):
        table = Table(["name", "value"])
        for name, value in constants().as_rows():
            table.add_row([name, value])
        return table, True

    def run_polylog(self):
        m = self.option("m")
        z = self.option("z")
        order = self.option("expansion_order")
        if z is None and order is None:
            order = max(m, 9)
        if order is not None:
            table = Table(["w_power", "L_power", "coefficient"])
            for row in li_singular_expansion(m, order).as_rows():
                table.add_row(row)
            return table, True
        z = mpf(z)
        value = li_inverted(m, z) if z > 1 else li_eval(m, z)
        table = Table(["m", "z", "value"])
        table.add_row([m, z, value])
        return table, True

    def run_eulersum(self):
        p, q = self.option("p"), self.option("q")
        kind = QUADRATIC if self.option("quadratic") else LINEAR
        closed = closed_form(kind, p, q)
        table = Table(["label", "closed_form", "oracle", "difference"])
        direct = self.option("direct")
        if direct is None:
            entry = EulerSumId(kind, p, q, closed, None)
            table.add_row([entry.label, closed, "", ""])
            return table, True
        oracle = s_pm_direct(p, q, kind, N=direct, levels=self.settings.get_oracle_levels(), tol=None)
        entry = EulerSumId(kind, p, q, closed, oracle)
        table.add_row([entry.label, closed, oracle, entry.difference])
        return table, True

    def run_integral(self):
        n_values = self.option("n_list")
        tol = self.tol(mpf(self.settings.get_integral_tol()))
        table = residual_table(n_values, tol)
        ok_rows = [row for row in table.rows if row[-1] == "ok"]
        if len(ok_rows) >= 2:
            for idx, k in enumerate(RESIDUAL_ORDERS):
                residuals = [row[1] - row[2 + idx] for row in ok_rows]
                if all(residuals):
                    order = fit_decay_order([row[0] for row in ok_rows], residuals)
                    logger.info("I(n) - I_(n,%d) decays like n^-%.2f", k, order)
        return table, len(ok_rows) == len(table.rows)

    def run_corollary(self):
        records = corollary_table(tol=self.tol(tolerance(12)))
        return Table.from_records(records), all(r.passed for r in records)

    def run_coeffs(self):
        m = self.option("m")
        n_max = self.option("n_max", COEFF_DEFAULT_N_MAX)
        k_max = self.option("k_max", VERIFIED_COEFF_ORDER)
        limit = self.settings.get_coeff_max_order()
        if k_max > limit:
            raise ContractViolation(ERROR_DOMAIN.format(name="k_max", value=k_max, domain=f"<= {limit}"))
        if k_max > VERIFIED_COEFF_ORDER:
            logger.warning("Columns past C_n%d are not checked against printed values", VERIFIED_COEFF_ORDER)
        n_min = self.option("n_min", 1)
        return compare_table(m, range(n_min, n_max + 1), k_max), True

    def run_derive(self):
        m = self.option("m")
        eps_order = self.option("eps_order", self.settings.get_eps_order())
        return derive_table(m, eps_order), True

    def run_verify_all(self):
        oracle = OracleSettings(self.settings.get_oracle_terms(), self.settings.get_oracle_levels())
        records = verify_all(self.config.precision_digits, self.config.jobs, oracle=oracle)
        failed = [r.name for r in records if not r.passed]
        if failed:
            logger.error("%d of %d checks failed: %s", len(failed), len(records), ", ".join(failed))
        else:
            logger.info("All %d checks passed", len(records))
        return Table.from_records(records), not failed


def run(config):
    """
    Execute a RunConfig and write its table

    Returns:
        int: 0 success, 1 failed record, 2 configuration or usage error, 3 I/O error
    """
    try:
        table, passed = PolyAsymApp(config).execute()
    except (ConfigurationError, ContractViolation) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except PolyAsymError as e:
        logger.error("%s", e)
        return EXIT_FAILED
    try:
        emit(table, config.format, config.output_path, stream=sys.stdout)
    except OSError as e:
        logger.error(ERROR_OUTPUT_FAILED.format(path=config.output_path, reason=e))
        return EXIT_IO
    return EXIT_OK if passed else EXIT_FAILED


def parse_n_list(text):
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def parse_real(text):
    # checked here, converted after the working precision is set
    try:
        mpf(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a real number, got {text!r}")
    return text


def build_parser():
    # Shared flags may appear before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=argparse.SUPPRESS, help="working precision in digits")
    common.add_argument("--tol", default=argparse.SUPPRESS, help="tolerance for the subcommand's main comparison")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output file (default stdout)")
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=argparse.SUPPRESS)
    common.add_argument("--config", default=argparse.SUPPRESS, help="settings JSON file")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes for verify-all")
    common.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog=APP_NAME, parents=[common], description=__doc__.strip().splitlines()[1])
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sub.add_parser("constants", parents=[common], help="dump the constant table")

    polylog = sub.add_parser("polylog", parents=[common], help="Li_m(z) or its expansion around z = 1")
    polylog.add_argument("--m", type=int, required=True)
    polylog.add_argument("--z", type=parse_real)
    polylog.add_argument("--expansion-order", type=int)

    eulersum = sub.add_parser("eulersum", parents=[common], help="alternating Euler sum closed form and oracle")
    eulersum.add_argument("--p", type=int, required=True)
    eulersum.add_argument("--q", type=int, required=True)
    eulersum.add_argument("--direct", type=int, metavar="N", help="also sum directly with N terms")
    eulersum.add_argument("--quadratic", action="store_true", help="sum (-1)^k (H_k^(p))^2 / k^q")

    integral = sub.add_parser("integral", parents=[common], help="I(n) against its partial sums")
    integral.add_argument("--n-list", type=parse_n_list, required=True)

    sub.add_parser("corollary", parents=[common], help="quadrature against closed form for the tabulated integrals")

    coeffs = sub.add_parser("coeffs", parents=[common], help="exact S_n against C_(n,k)")
    coeffs.add_argument("--m", type=int, choices=COEFF_WEIGHTS, required=True)
    coeffs.add_argument("--n-min", type=int)
    coeffs.add_argument("--n-max", type=int)
    coeffs.add_argument("--k-max", type=int)

    derive = sub.add_parser("derive", parents=[common], help="D_(i,j) table of S(eps, L)")
    derive.add_argument("--m", type=int, choices=COEFF_WEIGHTS, required=True)
    derive.add_argument("--eps-order", type=int)

    sub.add_parser("verify-all", parents=[common], help="run every check group")
    return parser


GLOBAL_FLAGS = {"precision", "tol", "out", "format", "config", "jobs", "verbose", "subcommand"}


def config_from_args(args, environ=None):
    settings = SettingsManager(getattr(args, "config", None), environ=environ)
    if not settings.loaded:
        raise ConfigurationError(settings.load_message)
    options = {k: v for k, v in vars(args).items() if k not in GLOBAL_FLAGS}
    return RunConfig(
        subcommand=args.subcommand,
        precision_digits=settings.get_precision_digits(getattr(args, "precision", None)),
        format=getattr(args, "format", None) or settings.get_default_format(),
        output_path=getattr(args, "out", None),
        tol=getattr(args, "tol", None),
        jobs=getattr(args, "jobs", None) or settings.get_jobs(),
        options=options,
        settings=settings,
    )


def setup_logging(verbose=False):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="[%(levelname)s] %(message)s",
        stream=sys.stderr,
        force=True,
    )


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    setup_logging(getattr(args, "verbose", False))
    logger.info("Starting %s v%s: %s", APP_NAME, APP_VERSION, args.subcommand)
    try:
        config = config_from_args(args)
    except ConfigurationError as e:
        logger.error("%s", e)
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
