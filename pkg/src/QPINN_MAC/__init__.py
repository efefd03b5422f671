from . import settings
from .hybrid import HybridModel, init_model, eval_mac
from .pinn import get_problem, train
