#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Exception hierarchy of polaritonrdmft.

Every error knows the exit status the command line front-end reports for it, so the
front-end can map failures without inspecting messages."""

from typing import Any, Optional


class PolaritonError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ConfigError(PolaritonError):
    exit_code = 2


class GridError(PolaritonError):
    exit_code = 2


class NonCommensurate(GridError):
    """Box length is not an integer multiple of the spacing."""


class TooSmall(GridError):
    """An axis has fewer points than the stencil support requires."""


class GridMismatch(GridError):
    """Two fields (or densities) that must share a grid do not."""


class ModelError(PolaritonError):
    exit_code = 2


class UnknownKind(ModelError):
    """Unknown potential family."""


class ArityMismatch(ModelError):
    """Number of photon coordinates does not match the number of modes."""


class BasisMismatch(PolaritonError):
    """A 1RDM and an integral table were built on different bases."""

    exit_code = 2


class ConvergenceError(PolaritonError):
    """An iterative procedure stopped before meeting its criteria.

    `partial` holds whatever the procedure had at the moment it gave up, so callers can
    still write flagged outputs."""

    exit_code = 3

    def __init__(self, message: str, partial: Optional[Any] = None):
        super().__init__(message)
        self.partial = partial


class NoConvergence(ConvergenceError):
    pass


class MuBracketFailure(ConvergenceError):
    """N(mu) does not straddle the particle number over the expanded bracket."""


class RepresentabilityError(PolaritonError):
    """An accepted iterate violates 0 <= n_i <= 2 or the particle-number sum rule."""

    exit_code = 3


class ResourceError(PolaritonError):
    exit_code = 4


class MemoryBudgetExceeded(ResourceError):
    pass


class CheckpointError(ConfigError):
    """A file is not a readable checkpoint container."""
