from typing import Any, Dict

from pydantic import ValidationError


def map_method_aliases(new_cls):
    method_aliases = {
        "validate_python": "model_validate",
        "validate_json": "model_validate_json",
        "json_schema": "model_json_schema",
    }
    for alias_name, target_name in method_aliases.items():
        setattr(new_cls, alias_name, getattr(new_cls, target_name))
    return new_cls


def errors_to_detail(exc: ValidationError) -> Dict[str, Any]:
    """Nest messages by error location; list positions become string keys."""
    detail: Dict[str, Any] = {}
    for error in exc.errors():
        keys = [str(x) for x in error["loc"]] or ["__root__"]
        node = detail
        for key in keys[:-1]:
            node = node.setdefault(key, {})
        node.setdefault(keys[-1], []).append(error["msg"])
    return detail
