# siplb/models/__init__.py
from .expression import (
    Add,
    Constant,
    Cos,
    Div,
    Exp,
    Expression,
    Mul,
    Neg,
    PowInt,
    Sin,
    Sub,
    Var,
    constant_node,
    eval_affine,
    eval_interval,
    eval_point,
    substitute,
    to_text,
    variables,
)
from .parser import parse

__all__ = [
    'Add',
    'Constant',
    'Cos',
    'Div',
    'Exp',
    'Expression',
    'Mul',
    'Neg',
    'PowInt',
    'Sin',
    'Sub',
    'Var',
    'constant_node',
    'eval_affine',
    'eval_interval',
    'eval_point',
    'parse',
    'substitute',
    'to_text',
    'variables',
]
