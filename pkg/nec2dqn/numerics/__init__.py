from .graph import ComputeGraph, Node, backward
from .network import Conv2d, Dense, ForwardPass, Network, ParamSet, Reshape, build_cnn, build_mlp, forward, init_params
from .optim import rmsprop_step
from .gradcheck import finite_difference_grad, relative_error
