# siplb/schemas/__init__.py
from .domain import (
    BoxRegion,
    Discretization,
    Interval,
    PointVec,
    VarAssignment,
    clamp_to_box,
    split_widest,
)
from .config import AlphaConfig, OptConfig, SipConfig
from .results import (
    CertifiedMin,
    FeasibleOutcome,
    IterationRecord,
    MinStatus,
    OracleOutcome,
    OutcomeSource,
    SipStatus,
    SolveReport,
    ViolationOutcome,
)

__all__ = [
    'BoxRegion',
    'Discretization',
    'Interval',
    'PointVec',
    'VarAssignment',
    'clamp_to_box',
    'split_widest',
    'AlphaConfig',
    'OptConfig',
    'SipConfig',
    'CertifiedMin',
    'FeasibleOutcome',
    'IterationRecord',
    'MinStatus',
    'OracleOutcome',
    'OutcomeSource',
    'SipStatus',
    'SolveReport',
    'ViolationOutcome',
]
