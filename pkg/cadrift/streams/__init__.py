from .concepts import ConceptFunction, RandomTreeModel, RandomTreeParams, label_of
from .csvio import CsvStreamSource, export_csv, import_csv
from .generator import StreamSpec, generate
from .presets import PRESETS, benchmark_suite, family_spec
from .stream import Instance, Stream

__all__ = [
    "ConceptFunction",
    "CsvStreamSource",
    "Instance",
    "PRESETS",
    "RandomTreeModel",
    "RandomTreeParams",
    "Stream",
    "StreamSpec",
    "benchmark_suite",
    "export_csv",
    "family_spec",
    "generate",
    "import_csv",
    "label_of",
]
