"""Compute the connected number of an arrangement numerically.

The arrangement is either an Artal configuration (``--b``, ``--mu`` and
optionally ``--j``) or an arrangement file (``--config``). Both the
union-find count and the offset count run; disagreement exits with 4.
"""

import logging
from pathlib import Path

from covercount.management.base import CoverCountCommand, parse_tolerance_overrides
from lib.cover.connectivity import arrangement_from_file, arrangement_to_file, cross_check
from lib.cover.fermat import ArtalFamilyConfig, artal_arrangement
from schemas.arrangement_file import ArrangementFile
from schemas.run_config import RunConfig, RunMode
from schemas.tolerances import DEFAULT_TOLERANCES

logger = logging.getLogger(__name__)


class Command(CoverCountCommand):
    """Run the monodromy engine on one arrangement."""

    help = "Compute c for an Artal triple or an arrangement file"

    def add_arguments(self, parser):
        """Add command line arguments."""
        parser.add_argument("--b", type=int, default=None, help="Degree of the Artal branch curve")
        parser.add_argument("--mu", type=int, default=None, help="Fermat exponent, a divisor of b")
        parser.add_argument("--j", type=int, nargs=3, default=None, help="j-values of the tangents of families 1, 2, 3")
        parser.add_argument("--seed", type=int, default=0, help="Master seed for the curve and the charts")
        parser.add_argument("--config", dest="input_path", type=Path, default=None, help="Arrangement file to load instead")
        parser.add_argument("--export", dest="export_path", type=Path, default=None, help="Write the arrangement file used")
        parser.add_argument("--tol", action="append", default=None, metavar="KEY=VALUE", help="Override a tolerance (repeatable)")
        parser.add_argument("--plain", action="store_true", help="Use h^nu without the f1 f2 f3 g term")

    def handle(self, *args, **options):
        config = RunConfig(
            mode=RunMode.COMPUTE,
            b=options["b"],
            mu=options["mu"],
            j_triple=options["j"],
            seed=options["seed"],
            input_path=options["input_path"],
            output_path=options["output_path"],
            export_path=options["export_path"],
            tolerance_overrides=parse_tolerance_overrides(options["tol"]),
            perturbed=not options["plain"],
        )
        tolerances = DEFAULT_TOLERANCES.with_overrides(config.tolerance_overrides)

        if config.input_path is not None:
            logger.info("[CLI] Loading arrangement from %s", config.input_path)
            arrangement = arrangement_from_file(ArrangementFile.load(config.input_path))
        else:
            family = ArtalFamilyConfig.with_j(config.b, config.mu, config.j_triple, config.seed, perturbed=config.perturbed)
            arrangement = artal_arrangement(family)

        if config.export_path is not None:
            exported = arrangement_to_file(arrangement, metadata=config.summary())
            config.export_path.write_text(exported.to_json() + "\n", encoding="utf-8")
            logger.info("[CLI] Exported arrangement to %s", config.export_path)

        report = cross_check(arrangement, config.seed, tolerances, config.summary())
        self.stderr.write(str(report))
        self.write_report(report, config.output_path)
