"""Answer one Carnot question, optionally double-checked by interpolation."""

import logging

from covercount.management.base import CoverCountCommand, parse_tolerance_overrides
from lib.cover.errors import MethodDisagreement
from lib.cover.exact import CarnotQuery, carnot_exists, carnot_exponent, contact_divisor_oracle, minimal_contact_degree
from schemas.reports import CarnotReport, ReportMetadata
from schemas.run_config import RunConfig, RunMode
from schemas.tolerances import DEFAULT_TOLERANCES

logger = logging.getLogger(__name__)


class Command(CoverCountCommand):
    """Decide whether a degree-d curve meets three Fermat tangents only at their inflection points."""

    help = "Carnot verdict for (mu, j1, j2, j3, d)"

    def add_arguments(self, parser):
        """Add command line arguments."""
        parser.add_argument("--mu", type=int, required=True, help="Fermat exponent")
        parser.add_argument("--j", type=int, nargs=3, required=True, help="j-values of the tangents of families 1, 2, 3")
        parser.add_argument("--d", type=int, required=True, help="Degree of the contact curve")
        parser.add_argument("--oracle", action="store_true", help="Also solve the interpolation problem numerically")
        parser.add_argument("--seed", type=int, default=0, help="Seed for the oracle's charts")
        parser.add_argument("--tol", action="append", default=None, metavar="KEY=VALUE", help="Override a tolerance, e.g. rank_tol=1e-9 (repeatable)")

    def handle(self, *args, **options):
        config = RunConfig(
            mode=RunMode.CARNOT,
            mu=options["mu"],
            j_triple=options["j"],
            d=options["d"],
            oracle=options["oracle"],
            seed=options["seed"],
            output_path=options["output_path"],
            tolerance_overrides=parse_tolerance_overrides(options["tol"]),
        )
        tolerances = DEFAULT_TOLERANCES.with_overrides(config.tolerance_overrides)
        query = CarnotQuery(mu=config.mu, j=config.j_triple, d=config.d)
        exists = carnot_exists(query)
        oracle = None
        if config.oracle:
            oracle = contact_divisor_oracle(query.mu, query.j, query.d, rank_tol=tolerances.rank_tol, seed=config.seed)
        report = CarnotReport(
            mu=query.mu,
            j_triple=query.j,
            d=query.d,
            carnot_exponent=carnot_exponent(query.j),
            exists=exists,
            minimal_contact_degree=minimal_contact_degree(query.mu, query.j),
            oracle=oracle,
            metadata=ReportMetadata(seed=config.seed if config.oracle else None, tolerances=tolerances, config=config.summary()),
        )
        if oracle is not None and oracle != exists:
            msg = f"Carnot says {exists} but the interpolation oracle says {oracle}"
            raise MethodDisagreement(msg, diagnostics=report.model_dump(mode="json"))
        logger.info("[CLI] mu=%s j=%s d=%s: exists=%s", query.mu, query.j, query.d, exists)
        self.write_report(report, config.output_path)
