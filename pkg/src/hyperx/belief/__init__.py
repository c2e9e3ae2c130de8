from .buffer import VaeBuffer
from .decoders import TransitionDecoder, gaussian_nll
from .encoder import BeliefEncoder, LatentBelief
from .vae import BeliefVae

__all__ = ["VaeBuffer", "TransitionDecoder", "gaussian_nll", "BeliefEncoder",
           "LatentBelief", "BeliefVae"]
