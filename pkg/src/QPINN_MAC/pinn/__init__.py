from .problems import ODEProblem, builtin_problems, get_problem
from .loss import LossWeights, LossBreakdown, loss_ic, loss_ode, loss_sol, total_loss_and_grad
from .trainer import TrainConfig, TrainTrace, train
