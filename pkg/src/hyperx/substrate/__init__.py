from . import autodiff, checkpoint
from .autodiff import Var, backward
from .nets import DenseNet, GRUCell, Linear, forward_dense, init_weights
from .optim import Adam
from .store import Param, ParamStore

__all__ = [
    "autodiff", "checkpoint", "Var", "backward", "DenseNet", "GRUCell",
    "Linear", "forward_dense", "init_weights", "Adam", "Param", "ParamStore",
]
