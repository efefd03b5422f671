from .mlp import DualValue, MLPParams, init_mlp, mlp_forward, mlp_forward_dual, forward_with_tangent, mlp_backprop
