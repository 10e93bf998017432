"""Exception types shared across the package."""


class BohmChaosError(Exception):
    pass


class InvalidDeformation(BohmChaosError, ValueError):
    """Deformation parameter lies in the forbidden interval [-1, 0]."""


class NodeDivision(BohmChaosError, ZeroDivisionError):
    """Division by a (numerically) vanishing ground-state amplitude."""


class SingularityEncountered(BohmChaosError, ArithmeticError):
    """The trajectory came too close to a node of the wave function."""


class DomainEscape(BohmChaosError):
    """A square-well trajectory left the open box (0, pi)^2."""


class IncompatibleProbe(BohmChaosError, ValueError):
    """Requested invariant does not exist for the given field model."""


class ConfigError(BohmChaosError, ValueError):
    pass
