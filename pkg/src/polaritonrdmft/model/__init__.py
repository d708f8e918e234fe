from .potentials import (
    BERYLLIUM_SOFTENING,
    DEFAULT_SOFTENING,
    PotentialKind,
    PotentialSpec,
    bare_potential,
    nuclear_repulsion,
    soft_coulomb,
)
from .system import EffectiveCoupling, ModelSpec, PhotonMode, effective_coupling, lambda_for
from .dressed import (
    OneBodyOperator,
    check_grid_arity,
    dressed_interaction,
    dressed_potential,
    interaction_matrix,
    mode_oscillator_matrix,
    mode_prefactor,
    one_body_operator,
)

__all__ = [
    "BERYLLIUM_SOFTENING",
    "DEFAULT_SOFTENING",
    "PotentialKind",
    "PotentialSpec",
    "bare_potential",
    "nuclear_repulsion",
    "soft_coulomb",
    "EffectiveCoupling",
    "ModelSpec",
    "PhotonMode",
    "effective_coupling",
    "lambda_for",
    "OneBodyOperator",
    "check_grid_arity",
    "dressed_interaction",
    "dressed_potential",
    "interaction_matrix",
    "mode_oscillator_matrix",
    "mode_prefactor",
    "one_body_operator",
]
