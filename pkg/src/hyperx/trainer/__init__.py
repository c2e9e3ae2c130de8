from .agent import Agent
from .evaluate import evaluate
from .loop import Trainer, load_agent, train
from ..normalize import RollingStd, RunningMeanStd

__all__ = ["Agent", "evaluate", "Trainer", "load_agent", "train",
           "RollingStd", "RunningMeanStd"]
