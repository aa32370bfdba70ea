from typing import Union

from pydantic import Field
from typing_extensions import Annotated

from .adwin import ADWIN, AdwinConfig
from .base import DriftDetector, SignalMapping, Verdict
from .curie import CurieConfig, CurieDetector
from .ddm import DDM, DdmConfig
from .eddm import EDDM, EddmConfig
from .page_hinkley import PageHinkley, PageHinkleyConfig

DetectorConfig = Annotated[
    Union[DdmConfig, EddmConfig, AdwinConfig, PageHinkleyConfig, CurieConfig],
    Field(discriminator="kind"),
]

DETECTOR_NAMES = {
    "ddm": DDM.name,
    "eddm": EDDM.name,
    "adwin": ADWIN.name,
    "ph": PageHinkley.name,
    "curie": CurieDetector.name,
}


def build_detector(config, **hints) -> DriftDetector:
    """Instantiate the detector a config describes; ``hints`` come from the stream."""
    return config.build(**hints)


__all__ = [
    "ADWIN",
    "AdwinConfig",
    "CurieConfig",
    "CurieDetector",
    "DDM",
    "DETECTOR_NAMES",
    "DdmConfig",
    "DetectorConfig",
    "DriftDetector",
    "EDDM",
    "EddmConfig",
    "PageHinkley",
    "PageHinkleyConfig",
    "SignalMapping",
    "Verdict",
    "build_detector",
]
