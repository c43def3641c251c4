"""Exception types raised by the residue-set solvers."""


class ReconstructionError(Exception):
    """Base class for solver failures on residue-set inputs."""


class InconsistentResiduesError(ReconstructionError):
    """No integer (or pair of integers) is consistent with the given residues."""


class AmbiguousResiduesError(ReconstructionError):
    """Several candidate pairs survive: the inputs lie outside the dynamic range."""


class ClusterMembershipError(ReconstructionError):
    """A common remainder matches neither cluster of a decomposition."""
