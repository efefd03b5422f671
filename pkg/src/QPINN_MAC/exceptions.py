from __future__ import annotations
from typing import TYPE_CHECKING, Iterable
from .enums import Status

if TYPE_CHECKING:
    from .version import SchemaVersion


class QPINNException(Exception):
    """ Common QPINN_MAC exceptions class """
    error: Status = Status.UNKNOWN


class ConfigurationError(QPINNException, ValueError):
    """ invalid configuration value, field is dotted path inside run config """
    error = Status.CONFIG_ERROR

    def __init__(self, message: str, field: str = ""):
        Exception.__init__(self, F"{field}: {message}" if field else message)
        self.field = field


class ShapeError(QPINNException, ValueError):
    """ dimensions of parameters or adjoints don't chain """
    error = Status.SHAPE_ERROR


class QubitIndexError(QPINNException, IndexError):
    error = Status.INDEX_ERROR

    def __init__(self, qubit: int, num_qubits: int):
        Exception.__init__(self, F"got {qubit=}, expected 0..{num_qubits - 1}")
        self.qubit = qubit


class UnsupportedActivation(QPINNException, ValueError):
    """ non smooth activation in derivative path """
    error = Status.UNSUPPORTED

    def __init__(self, activation: str, operation: str):
        Exception.__init__(self, F"{operation} needs smooth activation, got {activation}")
        self.activation = activation


class NumericError(QPINNException, ArithmeticError):
    error = Status.NUMERIC_ERROR

    def __init__(self, message: str, t: float = None):
        Exception.__init__(self, F"{message} at t={t!r}" if t is not None else message)
        self.t = t


class CatalogError(QPINNException, KeyError):
    error = Status.CATALOG_ERROR

    def __init__(self, name: str, names: Iterable[str]):
        self.names = tuple(names)
        Exception.__init__(self, F"unknown problem {name!r}, expected one of {', '.join(self.names)}")

    def __str__(self):
        return str(self.args[0])


class SchemaVersionError(QPINNException):
    """ snapshot written by incompatible schema, needs migration """
    error = Status.SCHEMA_ERROR

    def __init__(self, found: SchemaVersion, expected: SchemaVersion):
        Exception.__init__(self, F"snapshot schema {found} can't be loaded by schema {expected}: migrate the snapshot to {expected.major}.x")
        self.found = found
        self.expected = expected


class NonFiniteLoss(QPINNException, ArithmeticError):
    """ training stopped, snapshot is the model before the failed epoch """
    error = Status.DIVERGED

    def __init__(self, epoch: int, snapshot):
        Exception.__init__(self, F"non-finite loss at {epoch=}")
        self.epoch = epoch
        self.snapshot = snapshot
