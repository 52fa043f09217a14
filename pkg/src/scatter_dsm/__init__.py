"""scatter-dsm: 2D inverse medium scattering toolkit.

Simulates plane-wave scattering experiments on a pixel raster (method of
moments), computes direct-sampling index functions from (noisy, possibly
limited-aperture) data, applies the exact rotation/mirror augmentation
identities, generates seeded datasets in the SCAT1 container format, and
scores reconstructions.
"""

from .augment import (
    augment_pair_mirror,
    augment_pair_rotation,
    mirror_d1_grid,
    rotate_pi_grid,
    rotate_pi_tensor,
    rotate_quarters_grid,
)
from .container import (
    ContainerError,
    DatasetManifest,
    DatasetSample,
    read_container,
    write_container,
)
from .dataset import gen_dataset, generate_sample, sample_scene, tensor_from_fields
from .dsm import (
    IndexTensor,
    compute_index_tensor,
    convergence_check,
    index_far,
    index_far_normalized,
    index_limited,
    index_map,
    index_near,
    index_near_normalized,
    injectivity_rank,
    scale_tensor,
)
from .experiment import DEFAULT_K, FULL_APERTURE, HALF_APERTURE, ExperimentConfig
from .forward import (
    FieldRecord,
    SolveResult,
    SolverError,
    add_noise,
    far_field,
    scattered_at_receivers,
    solve_forward,
    solve_forward_all,
)
from .idx import IdxError, load_idx
from .metrics import relative_l2, ssim, total_variation
from .scenes import (
    CircleSpec,
    ContrastGrid,
    digit_to_grid,
    make_austria,
    make_letters,
    rasterize_circles,
)

__version__ = "0.1.0"
