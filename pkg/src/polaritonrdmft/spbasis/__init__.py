from .ip_solver import OrbitalSet, count_nodes, ip_solve
from .integrals import IntegralTable, build_integrals, coulomb_integrals, pair_densities

__all__ = [
    "OrbitalSet",
    "count_nodes",
    "ip_solve",
    "IntegralTable",
    "build_integrals",
    "coulomb_integrals",
    "pair_densities",
]
