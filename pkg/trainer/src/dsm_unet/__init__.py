"""dsm-unet: learns the map from direct-sampling index tensors to contrasts.

Couples to the simulation toolkit exclusively through SCAT1 containers:
training data comes in as (index tensor, permittivity) pairs, and
reconstructions go back out in the tensor slot for the core evaluator.
"""

from .augment import mirror_image, rotate_pi_image, rotate_pi_pair
from .infer import export_reconstructions, infer_averaged, load_model
from .losses import reconstruction_loss, ssim, tv_smooth
from .model import build_unet, parameter_count
from .physics import index_tensor, replay_noise
from .scat import Header, Sample, read_scat, split_ids, write_recon_scat
from .train import TrainConfig, circle_preset, digit_preset, train

__version__ = "0.1.0"
