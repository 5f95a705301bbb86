import copy
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.exceptions import ContractViolationError, ShapeMismatchError
from .graph import ComputeGraph, Node


@dataclass
class ParamSet:
    """Named parameters with matching gradients and RMSProp state."""
    params: Dict[str, np.ndarray]
    grads: Dict[str, Optional[np.ndarray]] = field(default_factory=dict)
    square_avg: Dict[str, np.ndarray] = field(default_factory=dict)
    velocity: Dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        for name, value in self.params.items():
            self.params[name] = np.asarray(value, dtype=np.float64)
            self.grads.setdefault(name, None)
            self.square_avg.setdefault(name, np.zeros_like(self.params[name]))
            self.velocity.setdefault(name, np.zeros_like(self.params[name]))

    def names(self) -> List[str]:
        return list(self.params)

    def load_gradients(self, grads: Dict[str, np.ndarray]) -> None:
        for name, g in grads.items():
            if name not in self.params:
                raise ContractViolationError(f"gradient for unknown parameter {name}")
            if np.shape(g) != self.params[name].shape:
                raise ContractViolationError(
                    f"gradient shape {np.shape(g)} != parameter shape {self.params[name].shape} for {name}"
                )
            self.grads[name] = np.asarray(g, dtype=np.float64)

    def clear_gradients(self) -> None:
        for name in self.grads:
            self.grads[name] = None

    def copy(self) -> "ParamSet":
        return copy.deepcopy(self)

    def copy_from(self, other: "ParamSet") -> None:
        """Hard update: overwrite parameter values in place, optimizer state untouched."""
        for name, value in other.params.items():
            self.params[name][...] = value

    def count(self) -> int:
        return int(sum(v.size for v in self.params.values()))


# layers

@dataclass(frozen=True)
class Dense:
    name: str
    in_features: int
    out_features: int
    activation: bool = True

    def init(self, rng: np.random.Generator) -> Dict[str, np.ndarray]:
        bound = 1.0 / np.sqrt(self.in_features)
        return {
            f"{self.name}.weight": rng.uniform(-bound, bound, size=(self.in_features, self.out_features)),
            f"{self.name}.bias": rng.uniform(-bound, bound, size=(self.out_features,)),
        }

    def output_shape(self, input_shape: Tuple[int, ...]) -> Tuple[int, ...]:
        if input_shape != (self.in_features,):
            raise ShapeMismatchError(f"{self.name}: expected ({self.in_features},), got {input_shape}")
        return (self.out_features,)

    def apply(self, graph: ComputeGraph, x: Node, params: ParamSet) -> Node:
        w = graph.parameter(f"{self.name}.weight", params.params[f"{self.name}.weight"])
        b = graph.parameter(f"{self.name}.bias", params.params[f"{self.name}.bias"])
        out = graph.affine(x, w, b)
        return graph.relu(out) if self.activation else out


@dataclass(frozen=True)
class Conv2d:
    name: str
    in_channels: int
    out_channels: int
    kernel: int
    stride: int = 1
    activation: bool = True

    def init(self, rng: np.random.Generator) -> Dict[str, np.ndarray]:
        bound = 1.0 / np.sqrt(self.in_channels * self.kernel * self.kernel)
        return {
            f"{self.name}.weight": rng.uniform(
                -bound, bound, size=(self.out_channels, self.in_channels, self.kernel, self.kernel)
            ),
            f"{self.name}.bias": rng.uniform(-bound, bound, size=(self.out_channels,)),
        }

    def output_shape(self, input_shape: Tuple[int, ...]) -> Tuple[int, ...]:
        if len(input_shape) != 3 or input_shape[0] != self.in_channels:
            raise ShapeMismatchError(f"{self.name}: expected ({self.in_channels}, H, W), got {input_shape}")
        _, h, w = input_shape
        out_h = (h - self.kernel) // self.stride + 1
        out_w = (w - self.kernel) // self.stride + 1
        if h < self.kernel or w < self.kernel or out_h < 1 or out_w < 1:
            raise ShapeMismatchError(
                f"{self.name}: kernel {self.kernel} stride {self.stride} does not fit input {h}x{w}"
            )
        return (self.out_channels, out_h, out_w)

    def apply(self, graph: ComputeGraph, x: Node, params: ParamSet) -> Node:
        w = graph.parameter(f"{self.name}.weight", params.params[f"{self.name}.weight"])
        b = graph.parameter(f"{self.name}.bias", params.params[f"{self.name}.bias"])
        out = graph.conv2d(x, w, b, self.stride)
        return graph.relu(out) if self.activation else out


@dataclass(frozen=True)
class Reshape:
    shape: Tuple[int, ...]

    def init(self, rng: np.random.Generator) -> Dict[str, np.ndarray]:
        return {}

    def output_shape(self, input_shape: Tuple[int, ...]) -> Tuple[int, ...]:
        if int(np.prod(input_shape)) != int(np.prod(self.shape)):
            raise ShapeMismatchError(f"cannot reshape {input_shape} to {self.shape}")
        return tuple(self.shape)

    def apply(self, graph: ComputeGraph, x: Node, params: ParamSet) -> Node:
        return graph.reshape(x, (x.value.shape[0],) + tuple(self.shape))


Layer = Union[Dense, Conv2d, Reshape]


class Network:
    def __init__(self, input_shape: Sequence[int], layers: Sequence[Layer], params: ParamSet):
        self.input_shape = tuple(int(d) for d in input_shape)
        self.layers = list(layers)
        self.params = params
        shape = self.input_shape
        for layer in self.layers:
            shape = layer.output_shape(shape)
        self.output_shape = shape

    def __call__(self, x) -> np.ndarray:
        return forward(self, x).output

    def clone(self) -> "Network":
        return Network(self.input_shape, self.layers, self.params.copy())


class ForwardPass(NamedTuple):
    activations: List[np.ndarray]
    output: np.ndarray
    graph: ComputeGraph
    output_node: Node


def forward(net: Network, x) -> ForwardPass:
    """Run ``net`` on one input or a batch, recording a graph for ``backward``."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape == net.input_shape:
        batched = False
        x = x[None]
    elif x.shape[1:] == net.input_shape:
        batched = True
    else:
        raise ShapeMismatchError(f"input shape {x.shape} does not match declared {net.input_shape}")

    graph = ComputeGraph(net.params)
    node = graph.constant(x)
    activations = []
    for layer in net.layers:
        node = layer.apply(graph, node, net.params)
        activations.append(node.value)
    if not batched:
        node = graph.reshape(node, net.output_shape)
    return ForwardPass(activations, node.value, graph, node)


def init_params(layers: Sequence[Layer], rng: np.random.Generator) -> ParamSet:
    arrays: Dict[str, np.ndarray] = {}
    for layer in layers:
        arrays.update(layer.init(rng))
    return ParamSet(arrays)


def build_mlp(
    input_shape: Sequence[int],
    hidden: Sequence[int],
    output_dim: int,
    rng: np.random.Generator,
    prefix: str = "mlp"
) -> Network:
    """Flatten, then rectified dense layers, then a linear output layer."""
    input_shape = tuple(input_shape)
    flat = int(np.prod(input_shape))
    layers: List[Layer] = []
    if len(input_shape) != 1:
        layers.append(Reshape((flat,)))
    sizes = [flat, *hidden]
    for i in range(len(hidden)):
        layers.append(Dense(f"{prefix}.fc{i}", sizes[i], sizes[i + 1]))
    layers.append(Dense(f"{prefix}.out", sizes[-1], output_dim, activation=False))
    return Network(input_shape, layers, init_params(layers, rng))


def build_cnn(
    input_shape: Sequence[int],
    channels: Sequence[int],
    kernels: Sequence[int],
    strides: Sequence[int],
    hidden: Sequence[int],
    output_dim: int,
    rng: np.random.Generator,
    prefix: str = "cnn"
) -> Network:
    """Conv stack over stacked frames, then an MLP head.

    A (depth, C, H, W) frame stack is folded into depth*C input channels.
    """
    if not (len(channels) == len(kernels) == len(strides)):
        raise ContractViolationError("conv channels, kernels and strides must have equal length")
    input_shape = tuple(input_shape)
    layers: List[Layer] = []
    if len(input_shape) == 4:
        image = (input_shape[0] * input_shape[1], input_shape[2], input_shape[3])
        layers.append(Reshape(image))
    elif len(input_shape) == 3:
        image = input_shape
    else:
        raise ShapeMismatchError(f"convolutional encoder needs an image input, got {input_shape}")

    shape = image
    in_ch = image[0]
    for i, (out_ch, k, s) in enumerate(zip(channels, kernels, strides)):
        conv = Conv2d(f"{prefix}.conv{i}", in_ch, out_ch, k, s)
        shape = conv.output_shape(shape)
        layers.append(conv)
        in_ch = out_ch
    flat = int(np.prod(shape))
    layers.append(Reshape((flat,)))
    sizes = [flat, *hidden]
    for i in range(len(hidden)):
        layers.append(Dense(f"{prefix}.fc{i}", sizes[i], sizes[i + 1]))
    layers.append(Dense(f"{prefix}.out", sizes[-1], output_dim, activation=False))
    return Network(input_shape, layers, init_params(layers, rng))
