from typing import Any, Callable, List

import numpy as np
from pydantic_core import core_schema as cs


class _NumpyVector:
    """
    Validates a flat sequence (or an ``ndarray``) into a 1-D ``ndarray`` of
    ``dtype`` and dumps it back to a plain list.
    """

    dtype: Any = float
    item_schema: Callable[[], cs.CoreSchema] = cs.float_schema

    @classmethod
    def check(cls, array: np.ndarray) -> np.ndarray:
        return array

    @classmethod
    def __get_pydantic_core_schema__(
        cls, source: Any, handler: Callable[[Any], cs.CoreSchema]
    ) -> cs.CoreSchema:
        def validate(values: Any) -> np.ndarray:
            array = np.asarray(values, dtype=cls.dtype)
            if array.ndim != 1:
                raise ValueError(f"expected a flat vector, got shape {array.shape}")
            return cls.check(array)

        from_list_schema = cs.chain_schema(
            [
                cs.list_schema(cls.item_schema()),
                cs.no_info_plain_validator_function(validate),
            ]
        )
        from_array_schema = cs.chain_schema(
            [
                cs.is_instance_schema(np.ndarray),
                cs.no_info_plain_validator_function(validate),
            ]
        )
        return cs.json_or_python_schema(
            json_schema=from_list_schema,
            python_schema=cs.union_schema([from_array_schema, from_list_schema]),
            serialization=cs.plain_serializer_function_ser_schema(
                lambda array: array.tolist()
            ),
        )


class FloatVector(_NumpyVector):
    dtype = float
    item_schema = cs.float_schema

    @classmethod
    def check(cls, array: np.ndarray) -> np.ndarray:
        if np.isnan(array).any():
            raise ValueError("NaN values are not allowed")
        return array


class BitVector(_NumpyVector):
    dtype = bool
    item_schema = cs.bool_schema


class SeedList(List[int]):
    """Seeds given either as a list of ints or as a ``"1,2,3"`` string."""

    @classmethod
    def __get_pydantic_core_schema__(
        cls, source: Any, handler: Callable[[Any], cs.CoreSchema]
    ) -> cs.CoreSchema:
        def validate_from_str(value: str) -> List[int]:
            items = [item.strip() for item in value.split(",") if item.strip()]
            return [int(item) for item in items]

        def validate_not_empty(values: List[int]) -> List[int]:
            if not values:
                raise ValueError("at least one seed is required")
            return list(values)

        int_list_schema = cs.list_schema(cs.int_schema())
        from_str_schema = cs.chain_schema(
            [
                cs.str_schema(),
                cs.no_info_plain_validator_function(validate_from_str),
            ]
        )
        return cs.chain_schema(
            [
                cs.union_schema([int_list_schema, from_str_schema]),
                cs.no_info_plain_validator_function(validate_not_empty),
            ],
            serialization=cs.plain_serializer_function_ser_schema(list),
        )
