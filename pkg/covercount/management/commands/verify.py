"""Compare predicted and computed connected numbers over a seed matrix."""

import logging

from django.core.management.base import CommandError
from sympy import divisors

from covercount.management.base import EXIT_DISAGREEMENT, CoverCountCommand, parse_seed_list
from lib.cover.connectivity import connected_number
from lib.cover.errors import CoverCountError
from lib.cover.exact import predicted_connected_number, standard_triple
from lib.cover.fermat import ArtalFamilyConfig, artal_arrangement
from schemas.reports import ReportMetadata, VerificationReport, VerificationRow
from schemas.run_config import RunConfig, RunMode

logger = logging.getLogger(__name__)


class Command(CoverCountCommand):
    """For every divisor mu >= 2 of b and every seed, predict c and compute it."""

    help = "Verify the prediction against the monodromy engine for degree b"

    def add_arguments(self, parser):
        """Add command line arguments."""
        parser.add_argument("--b", type=int, required=True, help="Degree of the branch curves (at most 12)")
        parser.add_argument("--seeds", type=str, default="0", help="Comma-separated seeds, e.g. 0,1,2")

    def handle(self, *args, **options):
        config = RunConfig(
            mode=RunMode.VERIFY,
            b=options["b"],
            seeds=parse_seed_list(options["seeds"]),
            output_path=options["output_path"],
        )
        seeds = config.seeds or [0]
        rows = [self.verify_one(config.b, int(mu), seed) for mu in divisors(config.b) if mu >= 2 for seed in seeds]  # noqa: PLR2004
        report = VerificationReport(b=config.b, seeds=seeds, rows=rows, metadata=ReportMetadata(config=config.summary()))
        self.write_report(report, config.output_path)
        if not report.all_agree:
            msg = f"Mismatch in {sum(not row.agrees for row in rows)} of {len(rows)} rows"
            raise CommandError(msg, returncode=EXIT_DISAGREEMENT)

    def verify_one(self, b: int, mu: int, seed: int) -> VerificationRow:
        """One row; library failures are recorded in the row instead of aborting the matrix."""
        j = standard_triple(mu)
        predicted = predicted_connected_number(b, mu, j).c
        try:
            report = connected_number(artal_arrangement(ArtalFamilyConfig.with_j(b, mu, j, seed)), seed)
        except CoverCountError as exc:
            logger.exception("[CLI] b=%s mu=%s seed=%s failed", b, mu, seed)
            return VerificationRow(b=b, mu=mu, seed=seed, predicted=predicted, error=f"{type(exc).__name__}: {exc}")
        row = VerificationRow(b=b, mu=mu, seed=seed, predicted=predicted, computed=report.c, method_agreement=report.method_agreement)
        logger.info("[CLI] b=%s mu=%s seed=%s: predicted %s, computed %s", b, mu, seed, predicted, report.c)
        return row
