from .config_parser import get_value


def version():
    return "0.1.0"


__max_qubits: int = int(get_value("statevector", "max_qubits", default=20))


def set_max_qubits(value: int):
    """ desk-scale cap for statevector size """
    global __max_qubits
    if value < 1:
        raise ValueError(F"got max qubits {value}, expected >= 1")
    __max_qubits = int(value)


def get_max_qubits() -> int:
    return __max_qubits
