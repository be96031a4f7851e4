"""Predict the connected number of a Fermat tangent triple from the Carnot criterion."""

from covercount.management.base import CoverCountCommand
from lib.cover.exact import predicted_connected_number
from schemas.reports import ReportMetadata
from schemas.run_config import RunConfig, RunMode


class Command(CoverCountCommand):
    """Print the PredictionReport for B_{b,mu} and one tangent triple."""

    help = "Predict c for the b-fold cover branched along B_{b,mu}"

    def add_arguments(self, parser):
        """Add command line arguments."""
        parser.add_argument("--b", type=int, required=True, help="Degree of the branch curve")
        parser.add_argument("--mu", type=int, required=True, help="Fermat exponent, a divisor of b")
        parser.add_argument("--j", type=int, nargs=3, default=None, help="j-values of the tangents of families 1, 2, 3")

    def handle(self, *args, **options):
        config = RunConfig(
            mode=RunMode.PREDICT,
            b=options["b"],
            mu=options["mu"],
            j_triple=options["j"],
            output_path=options["output_path"],
        )
        metadata = ReportMetadata(config=config.summary())
        report = predicted_connected_number(config.b, config.mu, config.j_triple, metadata=metadata)
        self.write_report(report, config.output_path)
