"""dimsig: encoding-agnostic deconvolution of flat binary signals.

Estimate the information content of an arbitrary bit stream under
several measures (Shannon and block entropy, LZW dictionary growth,
DEFLATE length, block decomposition against exhaustively enumerated
small-machine tables), perturb it bitwise and structurally, and infer
the 2D/3D shape in which its complexity is minimized.
"""

from .signals import BitSignal, Grid
from .machines import MachineSpace, Pattern, NONHALT, DISCARDED, enumerate_1d, enumerate_2d
from .ctm import CtmTable, build_table, save_table, load_table, TableFormatError
from .metrics import (
    shannon_entropy,
    block_entropy,
    lzw_dict_len,
    deflate_b64_len,
    bdm_1d,
    bdm_2d,
    bdm_3d,
    ComplexityReport,
    report,
)
from .encodings import EncodingScheme, EncodingError, encode, decode, parse_scheme
from .perturb import (
    FlipExperimentPlan,
    TrialSummary,
    flip_bits,
    run_flip_experiment,
    scramble,
    scramble_experiment,
)
from .landscape import (
    Partition,
    Landscape,
    SpikeCandidate,
    partition_candidates_2d,
    structural_sweep,
    minmax_scale,
    detect_spikes,
    infer_dims_2d,
    infer_dims_3d,
)
from .reconstruct import reshape, orientation_candidates, OrientationVariant

__version__ = "0.1.0"
