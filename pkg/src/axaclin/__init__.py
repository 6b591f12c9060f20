"""Formal abductive explanations and alignment audits for binary classifiers
over Boolean-binarized tabular data."""

__version__ = "0.1.0"

from .audit import (
    AuditPartition,
    alignment_metrics,
    audit,
    audit_fast,
    audit_relaxed,
    audit_strict,
    relevance_table,
)
from .core import (
    Conjunction,
    Decision,
    FeatureSpace,
    Instance,
    LabeledDataset,
    Literal,
    NEGATIVE,
    POSITIVE,
    parse_conjunction,
)
from .errors import (
    AxaclinError,
    CapacityError,
    ConfigError,
    ContractError,
    DataError,
    TrainingError,
    VerificationError,
)
from .explain import (
    Explanation,
    axp_containing,
    axp_deletion,
    axp_enumerate_all,
    axp_under_constraint,
    verify_explanation,
)
from .ingest import (
    DatasetConfig,
    load_and_binarize,
    load_config,
    load_preset,
    split,
)
from .mine import (
    CriticalKnowledge,
    MinedRule,
    MiningConfig,
    critical_cases,
    mine_critical_properties,
)
from .models import (
    LinearModel,
    ShallowNet,
    TrainConfig,
    default_config,
    entails,
    load_model,
    predict,
    save_model,
    train,
)
from ._kernels import backend_name

__all__ = [
    "AuditPartition",
    "AxaclinError",
    "CapacityError",
    "ConfigError",
    "Conjunction",
    "ContractError",
    "CriticalKnowledge",
    "DataError",
    "DatasetConfig",
    "Decision",
    "Explanation",
    "FeatureSpace",
    "Instance",
    "LabeledDataset",
    "LinearModel",
    "Literal",
    "MinedRule",
    "MiningConfig",
    "NEGATIVE",
    "POSITIVE",
    "ShallowNet",
    "TrainConfig",
    "TrainingError",
    "VerificationError",
    "alignment_metrics",
    "audit",
    "audit_fast",
    "audit_relaxed",
    "audit_strict",
    "axp_containing",
    "axp_deletion",
    "axp_enumerate_all",
    "axp_under_constraint",
    "backend_name",
    "critical_cases",
    "default_config",
    "entails",
    "load_and_binarize",
    "load_config",
    "load_model",
    "load_preset",
    "mine_critical_properties",
    "parse_conjunction",
    "predict",
    "relevance_table",
    "save_model",
    "split",
    "train",
    "verify_explanation",
]
