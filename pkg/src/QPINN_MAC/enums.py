from enum import Enum
from typing import Self


class QPINNEnum(Enum):
    """members are (importance, description) pairs"""
    def is_ok(self) -> bool:
        match self:
            case self.OK: return True
            case _:       return False

    @property
    def value(self):
        return super(QPINNEnum, self).value[1]

    @property
    def importance(self):
        return super(QPINNEnum, self).value[0]


class Status(QPINNEnum):
    """ error enumerator. Priority for status has biggest value """
    OK = 0, 'Success'
    CONFIG_ERROR = 2, 'Configuration error'
    SHAPE_ERROR = 2, 'Shape mismatch'
    INDEX_ERROR = 2, 'Qubit index out of range'
    CATALOG_ERROR = 2, 'Unknown catalog entry'
    UNSUPPORTED = 2, 'Unsupported activation'
    SCHEMA_ERROR = 3, 'Snapshot schema version mismatch'
    NUMERIC_ERROR = 3, 'Non-finite numeric value'
    DIVERGED = 4, 'Training diverged'
    UNKNOWN = 10, 'Unknown error'


class ChoiceEnum(str, Enum):
    """string-valued choice, constructed from config text"""

    @classmethod
    def from_str(cls, value: str) -> Self:
        try:
            return cls(value)
        except ValueError:
            raise ValueError(F"got {value!r}, expected one of {cls.get_values()}")

    @classmethod
    def get_values(cls) -> tuple[str, ...]:
        return tuple(it.value for it in cls)


class Activation(ChoiceEnum):
    TANH = "tanh"
    SIGMOID = "sigmoid"
    RELU = "relu"

    @property
    def is_smooth(self) -> bool:
        return self is not Activation.RELU


class ObservableKind(ChoiceEnum):
    Z_SUM = "z_sum"
    """ sum of single-qubit Pauli-Z """
    Z_GLOBAL = "z_global"
    """ Z tensor product over all qubits, plateau-prone baseline """


class Coupling(ChoiceEnum):
    MAC = "mac"
    """ y_j = (y_hat_j + 1) * <O>_j """
    QUANTUM_ONLY = "quantum_only"
    """ y_j = <O>_j, no classical network """


class ModelKind(ChoiceEnum):
    MAC = "mac"
    QUANTUM_ONLY_LOCAL = "quantum_only_local"
    QUANTUM_ONLY_GLOBAL = "quantum_only_global"

    @property
    def coupling(self) -> Coupling:
        match self:
            case ModelKind.MAC: return Coupling.MAC
            case _:             return Coupling.QUANTUM_ONLY

    @property
    def observable(self) -> ObservableKind | None:
        """None keeps the configured observable"""
        match self:
            case ModelKind.QUANTUM_ONLY_LOCAL:  return ObservableKind.Z_SUM
            case ModelKind.QUANTUM_ONLY_GLOBAL: return ObservableKind.Z_GLOBAL
            case _:                             return None


class OptimizerKind(ChoiceEnum):
    ADAM = "adam"
    SGD = "sgd"


class Mode(ChoiceEnum):
    TRAIN = "train"
    SOLVE = "solve"
    DIAGNOSE = "diagnose"


class ProbeLoss(ChoiceEnum):
    PHYSICS = "physics"
    SUPERVISED = "supervised"


class ProbeNorm(ChoiceEnum):
    MAX = "max"
    LP = "lp"
