"""Approximate-DRAM simulation and DNN error-tolerance tuning toolkit.

The package covers the full loop for running neural network inference out of
DRAM operated below nominal voltage/latency: bit-exact tensor serialization,
probabilistic bit-flip models with weak-cell maps, a synthetic ground-truth
device with a BER response curve, maximum-likelihood model fitting, a small
trainable network with implausible-value correction and curricular
retraining, tolerable-BER characterization, and greedy data-to-partition
mapping.
"""

from .numerics import (
    Dtype,
    INT4,
    INT8,
    INT16,
    FP32,
    Tensor,
    BitImage,
    quantize,
    dequantize,
    encode_bits,
    decode_bits,
)
from .dram import (
    DramGeometry,
    ErrorModel,
    UniformModel,
    BitlineModel,
    WordlineModel,
    DataValueModel,
    WeakCellMap,
    LayoutDescriptor,
    FlipTrace,
    generate_weak_cells,
    inject,
    expected_ber,
)
from .device import (
    OperatingPoint,
    NOMINAL,
    GroundTruthDevice,
    ErrorTrace,
    default_vendor_profile,
)
from .fitting import fit_params, select_model, FitResult
from .nn import (
    DnnModel,
    DataTypeId,
    Thresholds,
    DramEnv,
    make_synthetic_dataset,
    bound_correct,
    train_baseline,
    curricular_schedule,
    curricular_retrain,
    evaluate_accuracy,
)
from .characterize import CharacterizationResult, coarse_characterize, fine_characterize, default_ber_grid
from .mapping import (
    PartitionCatalog,
    MappingPlan,
    aggressiveness,
    coarse_map,
    fine_map,
    apply_plan,
)

__version__ = "0.1.0"
