from typing import Any, Dict, Optional, Union


class CadriftError(Exception):
    pass


class ImproperlyConfigured(CadriftError):
    """
    Raised when a configuration cannot be validated. ``detail`` mirrors the
    shape of the offending document, one list of messages per bad key.
    """

    def __init__(self, message: str, detail: Optional[Union[Dict[str, Any], list]] = None):
        super().__init__(message)
        self.detail = detail if detail is not None else {}


class NotPreparedError(CadriftError, RuntimeError):
    pass


class StreamFormatError(CadriftError, ValueError):
    def __init__(self, path: Any, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


class SnapshotFormatError(StreamFormatError):
    pass
