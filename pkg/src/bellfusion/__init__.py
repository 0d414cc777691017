"""Boosted linear-optical Bell-state analysis and fusion-network loss thresholds.

The package is organized in layers:

* :mod:`bellfusion.modes` / :mod:`bellfusion.optics`: Fock states on the
  8-mode (4 spatial ports x 2 polarizations) space and exact interferometer
  output statistics via matrix permanents.
* :mod:`bellfusion.bsm` / :mod:`bellfusion.uncertainty`: standard and
  ancilla-boosted analyzer schemes, click-pattern classification tables, and
  quality metrics with batch uncertainties.
* :mod:`bellfusion.detection`: photon loss and pseudo number resolution via
  splitter banks of threshold detectors.
* :mod:`bellfusion.fbqc`: encoded fusions, decoding graphs, erasure-aware
  decoders, and Monte Carlo loss-threshold estimation.
* :mod:`bellfusion.cli`: the ``bellfusion`` command.
"""

from .bsm import (
    BellKind,
    BsmMetrics,
    ClassificationTable,
    Scheme,
    Verdict,
    VerdictLabel,
    bell_state,
    derive_classification_table,
    empirical_metrics,
    ideal_metrics,
    mdf,
    total_variation_distance,
)
from .detection import (
    LossChannel,
    SplitterBank,
    erasure_probability,
    ppnr_correction,
    routing_probability,
)
from .fbqc.encoding import (
    EncodedFusionModel,
    FusionOutcome,
    PhysicalFusionModel,
    encoded_fusion_model,
    physical_fusion_model,
    recovered_parities,
)
from .fbqc.lattice import FusionNetworkLattice, build_lattice
from .fbqc.montecarlo import logical_error_rate, run_point
from .fbqc.threshold import (
    ScanConfig,
    ScanResult,
    ThresholdEstimate,
    default_scan_config,
    estimate_threshold,
    run_scan,
    write_scan_csv,
    write_threshold_json,
)
from .modes import ModeLabel, PhotonicState, mode_index
from .optics import Interferometer, output_distribution, permanent
from .uncertainty import BatchUncertainty, batch_uncertainty

__version__ = "0.1.0"

__all__ = [
    "BatchUncertainty",
    "BellKind",
    "BsmMetrics",
    "ClassificationTable",
    "EncodedFusionModel",
    "FusionNetworkLattice",
    "FusionOutcome",
    "Interferometer",
    "LossChannel",
    "ModeLabel",
    "PhotonicState",
    "PhysicalFusionModel",
    "ScanConfig",
    "ScanResult",
    "Scheme",
    "SplitterBank",
    "ThresholdEstimate",
    "Verdict",
    "VerdictLabel",
    "batch_uncertainty",
    "bell_state",
    "build_lattice",
    "default_scan_config",
    "derive_classification_table",
    "empirical_metrics",
    "encoded_fusion_model",
    "erasure_probability",
    "estimate_threshold",
    "ideal_metrics",
    "logical_error_rate",
    "mdf",
    "mode_index",
    "output_distribution",
    "permanent",
    "physical_fusion_model",
    "ppnr_correction",
    "recovered_parities",
    "routing_probability",
    "run_point",
    "run_scan",
    "total_variation_distance",
    "write_scan_csv",
    "write_threshold_json",
    "__version__",
]
