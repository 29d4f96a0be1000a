from .probing import draw_probing_signal
from .scene import TargetScene, draw_scene, draw_amplitudes, min_separation, to_physical, from_physical
from .synthesis import SampleVec, NoiseSpec, synthesize_periodic, synthesize_truncated, add_noise, as_samples
from .matched_filter import matched_filter
from .model_error import DecayStudy, model_error, prop2_decay_study
