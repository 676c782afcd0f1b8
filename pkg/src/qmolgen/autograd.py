"""Reverse-mode automatic differentiation over flat float64 numpy arrays.

Every network in this package (generator, critic, reward agents) runs on
this engine. Gradients are defined compositionally: each primitive's
vector-Jacobian product is itself expressed in primitives, so second-order
derivatives (needed for the critic's gradient penalty) come for free via
``grad(..., create_graph=True)``.
"""

from __future__ import annotations

import contextlib
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.special import expit as _expit


class ShapeError(ValueError):
    """Raised when an op receives incompatible operand shapes."""


_grad_enabled = True


@contextlib.contextmanager
def no_grad():
    """Disable graph recording inside the block."""
    global _grad_enabled
    prev = _grad_enabled
    _grad_enabled = False
    try:
        yield
    finally:
        _grad_enabled = prev


def _as_array(value) -> np.ndarray:
    # dtype is pinned; intermediate nodes may hold strided views, ops accept them
    return np.asarray(value, dtype=np.float64)


class Tensor:
    """A float64 array plus the bookkeeping needed to replay adjoints.

    The recorded graph (parents + per-node vjp closures) is the computation
    tape: `backward` walks it in reverse topological order exactly once.
    """

    __slots__ = ("data", "grad", "requires_grad", "_parents", "_vjp", "op")

    def __init__(self, data, requires_grad: bool = False, *, _parents=(), _vjp=None, op="leaf"):
        self.data = _as_array(data)
        self.grad: np.ndarray | None = None
        self.requires_grad = bool(requires_grad)
        self._parents: tuple[Tensor, ...] = _parents
        self._vjp: Callable[[Tensor], tuple[Tensor | None, ...]] | None = _vjp
        self.op = op

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return self.data.size

    def item(self) -> float:
        return float(self.data)

    def zero_grad(self) -> None:
        self.grad = None

    def detach(self) -> "Tensor":
        return Tensor(self.data.copy())

    def __repr__(self) -> str:
        return f"Tensor(op={self.op!r}, shape={self.shape}, requires_grad={self.requires_grad})"

    # operator sugar; scalars and arrays lift to constant tensors
    def __add__(self, other):
        return add(self, _lift(other))

    def __radd__(self, other):
        return add(_lift(other), self)

    def __sub__(self, other):
        return sub(self, _lift(other))

    def __rsub__(self, other):
        return sub(_lift(other), self)

    def __mul__(self, other):
        return multiply(self, _lift(other))

    def __rmul__(self, other):
        return multiply(_lift(other), self)

    def __truediv__(self, other):
        return divide(self, _lift(other))

    def __rtruediv__(self, other):
        return divide(_lift(other), self)

    def __neg__(self):
        return negate(self)

    def __matmul__(self, other):
        return matmul(self, _lift(other))

    def __getitem__(self, key):
        return tslice(self, key)

    def reshape(self, *shape) -> "Tensor":
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return reshape(self, shape)

    def transpose(self, *axes) -> "Tensor":
        if len(axes) == 1 and isinstance(axes[0], (tuple, list)):
            axes = tuple(axes[0])
        return transpose(self, axes if axes else None)

    def sum(self, axis=None, keepdims: bool = False) -> "Tensor":
        return tsum(self, axis=axis, keepdims=keepdims)

    def mean(self, axis=None, keepdims: bool = False) -> "Tensor":
        return tmean(self, axis=axis, keepdims=keepdims)

    def backward(self) -> None:
        backward(self)


def _lift(value) -> Tensor:
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


def _node(data, parents: Sequence[Tensor], vjp, op: str) -> Tensor:
    if _grad_enabled and any(p.requires_grad for p in parents):
        return Tensor(data, requires_grad=True, _parents=tuple(parents), _vjp=vjp, op=op)
    return Tensor(data, op=op)


def _unbroadcast(g: Tensor, shape: tuple[int, ...]) -> Tensor:
    """Reduce a gradient back to `shape` after numpy-style broadcasting."""
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    axes = tuple(range(extra)) + tuple(
        i + extra for i, n in enumerate(shape) if n == 1 and g.shape[i + extra] != 1
    )
    out = tsum(g, axis=axes, keepdims=True) if axes else g
    return reshape(out, shape)


# ---------------------------------------------------------------------------
# primitives


def add(a: Tensor, b: Tensor) -> Tensor:
    a, b = _lift(a), _lift(b)
    try:
        out = a.data + b.data
    except ValueError:
        raise ShapeError(f"add: incompatible shapes {a.shape} and {b.shape}") from None

    def vjp(g):
        return _unbroadcast(g, a.shape), _unbroadcast(g, b.shape)

    return _node(out, (a, b), vjp, "add")


def sub(a: Tensor, b: Tensor) -> Tensor:
    a, b = _lift(a), _lift(b)
    try:
        out = a.data - b.data
    except ValueError:
        raise ShapeError(f"sub: incompatible shapes {a.shape} and {b.shape}") from None

    def vjp(g):
        return _unbroadcast(g, a.shape), _unbroadcast(negate(g), b.shape)

    return _node(out, (a, b), vjp, "sub")


def multiply(a: Tensor, b: Tensor) -> Tensor:
    a, b = _lift(a), _lift(b)
    try:
        out = a.data * b.data
    except ValueError:
        raise ShapeError(f"multiply: incompatible shapes {a.shape} and {b.shape}") from None

    def vjp(g):
        return _unbroadcast(multiply(g, b), a.shape), _unbroadcast(multiply(g, a), b.shape)

    return _node(out, (a, b), vjp, "multiply")


def divide(a: Tensor, b: Tensor) -> Tensor:
    a, b = _lift(a), _lift(b)
    try:
        out = a.data / b.data
    except ValueError:
        raise ShapeError(f"divide: incompatible shapes {a.shape} and {b.shape}") from None

    def vjp(g):
        da = _unbroadcast(divide(g, b), a.shape)
        db = _unbroadcast(negate(divide(multiply(g, a), multiply(b, b))), b.shape)
        return da, db

    return _node(out, (a, b), vjp, "divide")


def negate(a: Tensor) -> Tensor:
    a = _lift(a)

    def vjp(g):
        return (negate(g),)

    return _node(-a.data, (a,), vjp, "negate")


def matmul(a: Tensor, b: Tensor) -> Tensor:
    a, b = _lift(a), _lift(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul: incompatible shapes {a.shape} and {b.shape}")
    out = a.data @ b.data

    def vjp(g):
        return matmul(g, transpose(b)), matmul(transpose(a), g)

    return _node(out, (a, b), vjp, "matmul")


def bmm(a: Tensor, b: Tensor) -> Tensor:
    """Stacked matmul (..., n, m) @ (..., m, k); leading dims broadcast."""
    a, b = _lift(a), _lift(b)
    if a.ndim < 3 or b.ndim < 3 or a.shape[-1] != b.shape[-2]:
        raise ShapeError(f"bmm: incompatible shapes {a.shape} and {b.shape}")
    try:
        out = a.data @ b.data
    except ValueError:
        raise ShapeError(f"bmm: incompatible shapes {a.shape} and {b.shape}") from None

    def _swap(t: Tensor) -> Tensor:
        axes = tuple(range(t.ndim - 2)) + (t.ndim - 1, t.ndim - 2)
        return transpose(t, axes)

    def vjp(g):
        da = _unbroadcast(bmm(g, _swap(b)), a.shape)
        db = _unbroadcast(bmm(_swap(a), g), b.shape)
        return da, db

    return _node(out, (a, b), vjp, "bmm")


def transpose(a: Tensor, axes: tuple[int, ...] | None = None) -> Tensor:
    a = _lift(a)
    if axes is None:
        axes = tuple(reversed(range(a.ndim)))
    inverse = tuple(np.argsort(axes))

    def vjp(g):
        return (transpose(g, inverse),)

    return _node(a.data.transpose(axes), (a,), vjp, "transpose")


def reshape(a: Tensor, shape: tuple[int, ...]) -> Tensor:
    a = _lift(a)
    try:
        out = a.data.reshape(shape)
    except ValueError:
        raise ShapeError(f"reshape: cannot view {a.shape} as {shape}") from None

    def vjp(g):
        return (reshape(g, a.shape),)

    return _node(out, (a,), vjp, "reshape")


def broadcast_to(a: Tensor, shape: tuple[int, ...]) -> Tensor:
    a = _lift(a)
    try:
        out = np.broadcast_to(a.data, shape)
    except ValueError:
        raise ShapeError(f"broadcast_to: cannot broadcast {a.shape} to {shape}") from None

    def vjp(g):
        return (_unbroadcast(g, a.shape),)

    return _node(out.copy(), (a,), vjp, "broadcast_to")


def _norm_axis(axis, ndim: int) -> tuple[int, ...]:
    if axis is None:
        return tuple(range(ndim))
    if isinstance(axis, int):
        axis = (axis,)
    return tuple(ax % ndim for ax in axis)


def tsum(a: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    a = _lift(a)
    axes = _norm_axis(axis, a.ndim)
    out = a.data.sum(axis=axes, keepdims=keepdims)

    def vjp(g):
        gk = g if keepdims else reshape(
            g, tuple(1 if i in axes else n for i, n in enumerate(a.shape))
        )
        return (broadcast_to(gk, a.shape),)

    return _node(out, (a,), vjp, "sum")


def tmean(a: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    a = _lift(a)
    axes = _norm_axis(axis, a.ndim)
    count = int(np.prod([a.shape[i] for i in axes])) if a.ndim else 1
    out = a.data.mean(axis=axes, keepdims=keepdims)

    def vjp(g):
        gk = g if keepdims else reshape(
            g, tuple(1 if i in axes else n for i, n in enumerate(a.shape))
        )
        return (multiply(broadcast_to(gk, a.shape), Tensor(1.0 / count)),)

    return _node(out, (a,), vjp, "mean")


def tanh(a: Tensor) -> Tensor:
    a = _lift(a)
    out = _node(np.tanh(a.data), (a,), None, "tanh")

    def vjp(g):
        return (multiply(g, sub(Tensor(1.0), multiply(out, out))),)

    out._vjp = vjp
    return out


def sigmoid(a: Tensor) -> Tensor:
    a = _lift(a)
    out = _node(_expit(a.data), (a,), None, "sigmoid")

    def vjp(g):
        return (multiply(g, multiply(out, sub(Tensor(1.0), out))),)

    out._vjp = vjp
    return out


def relu(a: Tensor) -> Tensor:
    a = _lift(a)
    mask = (a.data > 0).astype(np.float64)

    def vjp(g):
        return (multiply(g, Tensor(mask)),)

    return _node(np.maximum(a.data, 0.0), (a,), vjp, "relu")


def square(a: Tensor) -> Tensor:
    a = _lift(a)

    def vjp(g):
        return (multiply(g, multiply(Tensor(2.0), a)),)

    return _node(a.data * a.data, (a,), vjp, "square")


def sqrt(a: Tensor) -> Tensor:
    a = _lift(a)
    out = _node(np.sqrt(a.data), (a,), None, "sqrt")

    def vjp(g):
        return (divide(multiply(g, Tensor(0.5)), out),)

    out._vjp = vjp
    return out


def softmax_lastdim(a: Tensor) -> Tensor:
    a = _lift(a)
    shifted = a.data - a.data.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    y = e / e.sum(axis=-1, keepdims=True)
    out = _node(y, (a,), None, "softmax_lastdim")

    def vjp(g):
        gy = multiply(g, out)
        return (sub(gy, multiply(out, tsum(gy, axis=-1, keepdims=True))),)

    out._vjp = vjp
    return out


def concat(tensors: Sequence[Tensor], axis: int = 0) -> Tensor:
    tensors = [_lift(t) for t in tensors]
    if not tensors:
        raise ShapeError("concat: empty input list")
    nd = tensors[0].ndim
    axis = axis % nd
    for t in tensors[1:]:
        if t.ndim != nd or any(
            i != axis and t.shape[i] != tensors[0].shape[i] for i in range(nd)
        ):
            raise ShapeError(
                f"concat: incompatible shapes {[t.shape for t in tensors]} on axis {axis}"
            )
    out = np.concatenate([t.data for t in tensors], axis=axis)
    offsets = np.cumsum([0] + [t.shape[axis] for t in tensors])

    def vjp(g):
        grads = []
        for i, t in enumerate(tensors):
            key = tuple(
                slice(offsets[i], offsets[i + 1]) if d == axis else slice(None)
                for d in range(nd)
            )
            grads.append(tslice(g, key))
        return tuple(grads)

    return _node(out, tuple(tensors), vjp, "concat")


def tslice(a: Tensor, key) -> Tensor:
    a = _lift(a)
    out = a.data[key]

    def vjp(g):
        return (scatter(g, a.shape, key),)

    return _node(np.ascontiguousarray(out), (a,), vjp, "slice")


def scatter(g: Tensor, shape: tuple[int, ...], key) -> Tensor:
    """Embed `g` into a zero tensor of `shape` at `key` (adjoint of slice)."""
    g = _lift(g)
    out = np.zeros(shape, dtype=np.float64)
    out[key] = g.data

    def vjp(gg):
        return (tslice(gg, key),)

    return _node(out, (g,), vjp, "scatter")


# dispatcher honoring the generic op-kind interface
_OPS: dict[str, Callable] = {
    "matmul": matmul,
    "bmm": bmm,
    "add": add,
    "sub": sub,
    "multiply": multiply,
    "divide": divide,
    "negate": negate,
    "tanh": tanh,
    "sigmoid": sigmoid,
    "relu": relu,
    "softmax_lastdim": softmax_lastdim,
    "sum": tsum,
    "mean": tmean,
    "square": square,
    "sqrt": sqrt,
    "concat": concat,
    "slice": tslice,
    "transpose": transpose,
    "reshape": reshape,
    "broadcast_to": broadcast_to,
}


def apply(op_kind: str, *inputs, **kwargs) -> Tensor:
    """Run a primitive by name; unknown kinds and bad shapes raise."""
    try:
        fn = _OPS[op_kind]
    except KeyError:
        raise ValueError(f"unknown op kind {op_kind!r}") from None
    if op_kind == "concat":
        return fn(list(inputs), **kwargs)
    return fn(*inputs, **kwargs)


# ---------------------------------------------------------------------------
# reverse pass


def topological_order(root: Tensor) -> list[Tensor]:
    """Nodes reachable from `root`, parents before children, each once."""
    order: list[Tensor] = []
    seen: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for parent in node._parents:
            if id(parent) not in seen:
                stack.append((parent, False))
    return order


def grad(
    output: Tensor,
    inputs: Iterable[Tensor],
    create_graph: bool = False,
) -> list[Tensor]:
    """Gradients of a scalar `output` w.r.t. `inputs`, as tensors.

    With ``create_graph=True`` the returned gradients are themselves
    differentiable nodes, enabling e.g. a penalty on a gradient norm.
    """
    inputs = list(inputs)
    if output.data.ndim != 0:
        raise ShapeError(f"grad: output must be scalar, got shape {output.shape}")
    cotangents: dict[int, Tensor] = {id(output): Tensor(1.0)}
    ctx = contextlib.nullcontext() if create_graph else no_grad()
    with ctx:
        for node in reversed(topological_order(output)):
            g = cotangents.get(id(node))
            if g is None or node._vjp is None:
                continue
            parent_grads = node._vjp(g)
            for parent, pg in zip(node._parents, parent_grads):
                if pg is None or not parent.requires_grad:
                    continue
                held = cotangents.get(id(parent))
                cotangents[id(parent)] = pg if held is None else add(held, pg)
        results = []
        for t in inputs:
            g = cotangents.get(id(t))
            results.append(g if g is not None else Tensor(np.zeros(t.shape)))
    return results


def backward(loss: Tensor) -> None:
    """Accumulate d(loss)/d(leaf) into `.grad` of every requires_grad leaf."""
    if loss.data.ndim != 0:
        raise ShapeError(f"backward: loss must be scalar, got shape {loss.shape}")
    order = topological_order(loss)
    leaves = [t for t in order if t.requires_grad and t._vjp is None]
    grads = grad(loss, leaves, create_graph=False)
    for leaf, g in zip(leaves, grads):
        if leaf.grad is None:
            leaf.grad = g.data.copy()
        else:
            leaf.grad += g.data


# ---------------------------------------------------------------------------
# optimizer


class Adam:
    """Adam with in-place parameter updates and grad reset on step."""

    def __init__(
        self,
        params: Sequence[Tensor],
        lr: float = 1e-3,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
    ):
        self.params = list(params)
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.step_count = 0
        self.m = [np.zeros(p.shape) for p in self.params]
        self.v = [np.zeros(p.shape) for p in self.params]

    def step(self) -> None:
        for p in self.params:
            if p.grad is None:
                raise ValueError(f"adam_step: parameter {p!r} has no gradient")
        self.step_count += 1
        t = self.step_count
        bias1 = 1.0 - self.beta1**t
        bias2 = 1.0 - self.beta2**t
        for p, m, v in zip(self.params, self.m, self.v):
            g = p.grad
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p.data -= self.lr * (m / bias1) / (np.sqrt(v / bias2) + self.eps)
            p.grad = None

    def zero_grad(self) -> None:
        for p in self.params:
            p.grad = None

    def state_arrays(self) -> dict[str, np.ndarray]:
        out: dict[str, np.ndarray] = {}
        for i, (m, v) in enumerate(zip(self.m, self.v)):
            out[f"m{i}"] = m
            out[f"v{i}"] = v
        return out

    def load_state_arrays(self, arrays: dict[str, np.ndarray], step_count: int) -> None:
        self.step_count = step_count
        for i in range(len(self.params)):
            self.m[i] = arrays[f"m{i}"].reshape(self.params[i].shape).copy()
            self.v[i] = arrays[f"v{i}"].reshape(self.params[i].shape).copy()
