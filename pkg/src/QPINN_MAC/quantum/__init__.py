from .statevector import StateVector, init_zero_state, apply_ry, apply_h, apply_cp_all, expect_z, expect_z_global
from .qnode import QNodeConfig, QNodeParams, ObservableSpec, apply_variational_layer, prepare_qnode_state, expectation, grad_parameter_shift
