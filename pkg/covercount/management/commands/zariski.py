"""Emit the Zariski certificate of degree b."""

from covercount.management.base import CoverCountCommand
from lib.cover.exact import zariski_certificate
from lib.cover.fermat import ArtalFamilyConfig, validate_artal_family
from schemas.reports import ReportMetadata
from schemas.run_config import RunConfig, RunMode


class Command(CoverCountCommand):
    """Connected numbers of B_{b,mu} for every divisor mu of b.

    With ``--include-validity`` each member also gets an ArtalValidityReport,
    the numerical evidence that the members share their combinatorics.
    """

    help = "Zariski k-plet certificate for degree b"

    def add_arguments(self, parser):
        """Add command line arguments."""
        parser.add_argument("--b", type=int, required=True, help="Degree of the branch curves")
        parser.add_argument("--include-validity", action="store_true", help="Attach a validity report per member")
        parser.add_argument("--seed", type=int, default=0, help="Seed of the perturbation term g")
        parser.add_argument("--samples", type=int, default=20, help="Gradient spot-check samples per tangency")

    def handle(self, *args, **options):
        config = RunConfig(
            mode=RunMode.ZARISKI,
            b=options["b"],
            seed=options["seed"],
            include_validity=options["include_validity"],
            samples=options["samples"],
            output_path=options["output_path"],
        )
        metadata = ReportMetadata(seed=config.seed if config.include_validity else None, config=config.summary())
        certificate = zariski_certificate(config.b, metadata=metadata)
        if config.include_validity:
            validity = [
                validate_artal_family(ArtalFamilyConfig.with_j(config.b, entry.mu, entry.j_triple, config.seed), samples=config.samples)
                for entry in certificate.entries
            ]
            certificate = certificate.model_copy(update={"validity": validity})
        self.stderr.write(str(certificate))
        self.write_report(certificate, config.output_path)
