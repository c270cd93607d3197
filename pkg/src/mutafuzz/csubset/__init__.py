from .ast import (
    FunctionSignature,
    Node,
    SourceUnit,
    TypeDescriptor,
    same_shape,
    struct_type,
    walk,
)
from .parser import extract_signatures, function_of_span, parse, render

__all__ = [
    "FunctionSignature",
    "Node",
    "SourceUnit",
    "TypeDescriptor",
    "extract_signatures",
    "function_of_span",
    "parse",
    "render",
    "same_shape",
    "struct_type",
    "walk",
]
