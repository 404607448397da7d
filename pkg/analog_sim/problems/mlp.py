#!/usr/bin/env python3
"""
MLP - tanh perceptron whose linear layers live on analog tiles

Layers only need ``forward(x)``, ``backward(d)`` and ``effective_weights()``,
so trainers, bare composites and digital layers mix freely. Biases are
digital and updated with exact SGD.
"""

from dataclasses import dataclass
from typing import List, Optional, Protocol, Sequence, Tuple

import numpy as np

from ..core.exceptions import TileShapeError
from ..core.logger import get_logger

logger = get_logger(__name__)


class LinearLayer(Protocol):
    def forward(self, x: np.ndarray) -> np.ndarray: ...

    def backward(self, d: np.ndarray) -> np.ndarray: ...

    def effective_weights(self) -> np.ndarray: ...


@dataclass(frozen=True)
class MlpSpec:
    layer_sizes: Tuple[int, ...] = (784, 64, 10)
    activation: str = "tanh"
    analog_mask: Optional[Tuple[bool, ...]] = None
    loss: str = "cross_entropy"

    def __post_init__(self):
        if len(self.layer_sizes) < 2:
            raise TileShapeError("an MLP needs at least an input and an output size")
        if self.activation != "tanh":
            raise TileShapeError(f"unsupported activation '{self.activation}'")
        if self.loss not in ("cross_entropy", "mse"):
            raise TileShapeError(f"unsupported loss '{self.loss}'")
        if self.analog_mask is not None and len(self.analog_mask) != self.num_layers:
            raise TileShapeError(f"analog mask has {len(self.analog_mask)} entries for {self.num_layers} layers")

    @property
    def num_layers(self) -> int:
        return len(self.layer_sizes) - 1

    def layer_shape(self, index: int) -> Tuple[int, int]:
        return (self.layer_sizes[index], self.layer_sizes[index + 1])

    def is_analog(self, index: int) -> bool:
        return True if self.analog_mask is None else bool(self.analog_mask[index])


class DigitalLayer:
    """Floating-point layer for layers masked out of analog execution"""

    def __init__(self, weights: np.ndarray, alpha: float = 0.1):
        self.weights = np.array(weights, dtype=float)
        self.alpha = alpha

    def forward(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.weights

    def backward(self, d: np.ndarray) -> np.ndarray:
        return np.asarray(d, dtype=float) @ self.weights.T

    def effective_weights(self) -> np.ndarray:
        return self.weights

    def step(self, x: np.ndarray, delta: np.ndarray) -> None:
        self.weights -= self.alpha * np.outer(x, delta)

    def record_loss(self, loss: float) -> None:
        pass


def _softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - np.max(z, axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / np.sum(exp, axis=-1, keepdims=True)


def output_loss(spec: MlpSpec, logits: np.ndarray, target) -> Tuple[float, np.ndarray]:
    """Loss and its gradient with respect to the logits"""
    if spec.loss == "cross_entropy":
        probs = _softmax(logits)
        label = int(target)
        loss = -float(np.log(max(probs[label], 1e-300)))
        grad = probs.copy()
        grad[label] -= 1.0
        return loss, grad
    target = np.asarray(target, dtype=float)
    diff = logits - target
    return 0.5 * float(diff @ diff), diff


def mlp_forward_backward(spec: MlpSpec, layers: Sequence[LinearLayer], biases: Sequence[np.ndarray],
                         sample: Tuple[np.ndarray, object]
                         ) -> Tuple[float, List[Tuple[np.ndarray, np.ndarray]]]:
    """
    One sample through the network

    Returns:
        (loss, pairs) where pairs[l] = (layer input x, output error delta);
        outer(x, delta) is the loss gradient of layer l's effective weights.
    """
    if len(layers) != spec.num_layers or len(biases) != spec.num_layers:
        raise TileShapeError(f"expected {spec.num_layers} layers and biases")
    x, target = sample
    h = np.asarray(x, dtype=float).ravel()
    if h.size != spec.layer_sizes[0]:
        raise TileShapeError(f"input of size {h.size} for an MLP expecting {spec.layer_sizes[0]}")

    inputs: List[np.ndarray] = []
    activations: List[np.ndarray] = []
    for index, (layer, bias) in enumerate(zip(layers, biases)):
        inputs.append(h)
        z = layer.forward(h) + bias
        h = z if index == spec.num_layers - 1 else np.tanh(z)
        activations.append(h)

    loss, delta = output_loss(spec, h, target)
    pairs: List[Tuple[np.ndarray, np.ndarray]] = [None] * spec.num_layers
    for index in range(spec.num_layers - 1, -1, -1):
        pairs[index] = (inputs[index], delta)
        if index > 0:
            upstream = layers[index].backward(delta)
            delta = upstream * (1.0 - activations[index - 1] ** 2)
    return loss, pairs


def mlp_loss(spec: MlpSpec, weights: Sequence[np.ndarray], biases: Sequence[np.ndarray],
             sample: Tuple[np.ndarray, object]) -> float:
    """Loss for dense weight matrices; the reference for gradient checks"""
    h = np.asarray(sample[0], dtype=float).ravel()
    for index, (W, b) in enumerate(zip(weights, biases)):
        z = h @ W + b
        h = z if index == spec.num_layers - 1 else np.tanh(z)
    return output_loss(spec, h, sample[1])[0]


class MlpModel:
    """Layers plus digital biases, trained one sample at a time"""

    def __init__(self, spec: MlpSpec, layers: Sequence, bias_lr: float = 0.1):
        self.spec = spec
        self.layers = list(layers)
        self.biases = [np.zeros(spec.layer_sizes[i + 1]) for i in range(spec.num_layers)]
        self.bias_lr = bias_lr

    def train_sample(self, x: np.ndarray, target) -> float:
        loss, pairs = mlp_forward_backward(self.spec, self.layers, self.biases, (x, target))
        for layer, bias, (inp, delta) in zip(self.layers, self.biases, pairs):
            layer.step(inp, delta)
            bias -= self.bias_lr * delta
        return loss

    def logits(self, X: np.ndarray) -> np.ndarray:
        h = np.atleast_2d(np.asarray(X, dtype=float))
        for index, (layer, bias) in enumerate(zip(self.layers, self.biases)):
            z = layer.forward(h) + bias
            h = z if index == self.spec.num_layers - 1 else np.tanh(z)
        return h

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.logits(X), axis=-1)

    def accuracy(self, X: np.ndarray, labels: np.ndarray) -> float:
        if len(labels) == 0:
            return float("nan")
        return float(np.mean(self.predict(X) == np.asarray(labels)))

    def mean_loss(self, X: np.ndarray, targets) -> float:
        losses = [output_loss(self.spec, z, t)[0] for z, t in zip(self.logits(X), targets)]
        return float(np.mean(losses))

    def record_loss(self, loss: float) -> None:
        for layer in self.layers:
            layer.record_loss(loss)
