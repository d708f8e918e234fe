from .uniform_grid import Axis, Field, UniformGrid, make_axis, make_grid
from .stencil import apply_laplacian, laplacian_matrix, second_derivative, second_derivative_matrix
from .quadrature import inner_product, integrate, integrate_over, marginal, norm

__all__ = [
    "Axis",
    "Field",
    "UniformGrid",
    "make_axis",
    "make_grid",
    "apply_laplacian",
    "laplacian_matrix",
    "second_derivative",
    "second_derivative_matrix",
    "inner_product",
    "integrate",
    "integrate_over",
    "marginal",
    "norm",
]
