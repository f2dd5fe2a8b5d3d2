"""EEG eye-artifact removal toolkit.

Filtering and trial segmentation, fixed-point ICA, EOG-correlation component
selection, complete and partial rejection, artifact-diminished unmixing, and
a synthetic-session oracle with known ground truth.
"""
from .config import PipelineConfig, load_config
from .dsp import apply_zero_phase, design_bandstop, design_fir, preprocess, resample
from .ica import ComponentSet, IcaConfig, UnmixingMatrix, fit_ica, remix, unmix, whiten
from .metrics import amari_index, channel_eog_cc, reduction, snr
from .model import (AnnotationStats, MembershipFunction, Recording,
                    WindowedMembershipFunction, msf_normalize, msf_stats)
from .pipeline import run_pipeline
from .rejection import (CorrelationReport, build_correlation_report,
                        complete_reject, eog_component_correlation,
                        excise_artifacts, fit_diminished_unmixing, msf_to_wmsf,
                        partial_reject, select_artifactual, unmixing_difference)
from .segmentation import TriggerEvents, detect_triggers, segment
from .storage import load_msf, load_recording, save_msf, save_recording
from .synth import GroundTruth, SynthSpec, generate, perturb_msf

__version__ = "0.1.0"
