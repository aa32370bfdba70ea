from typing import Any, Sequence, Union


def safe_getter(instance: Union[dict, Sequence, object], key: str, default: Any = None) -> Any:
    """One segment of a dotted path: a dict key, a list index or an attribute."""
    if isinstance(instance, dict):
        return instance.get(key, default)
    if isinstance(instance, Sequence) and not isinstance(instance, str):
        try:
            return instance[int(key)]
        except (IndexError, ValueError):
            return default
    return getattr(instance, key, default)
