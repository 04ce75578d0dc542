"""Exception types shared across the package."""


class ShapeMismatchError(ValueError):
    """Operands have incompatible shapes; the message names both."""


class DomainError(ValueError):
    """Input violates a mathematical precondition (range, normalization)."""


class NonFiniteError(ArithmeticError):
    """A NaN or Inf appeared where finite values are required."""


class ConfigError(ValueError):
    """Invalid run configuration; message lists every violation."""


class PipelineOrderError(RuntimeError):
    """A CLI stage was invoked before its upstream artifact exists."""


def require_shape(name_a, a_shape, name_b, b_shape):
    if a_shape != b_shape:
        raise ShapeMismatchError(
            f"{name_a} has shape {tuple(a_shape)} but {name_b} has shape {tuple(b_shape)}"
        )
