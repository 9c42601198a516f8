from abc import ABC, abstractmethod
from typing import Any, Dict, Optional, Tuple

from ..sumsets import ElementSet, SumCertificate, is_k_basis


class BaseConstruction(ABC):
    """Base class for basis constructions with a published size bound."""

    name: str = ""

    @abstractmethod
    def build(self, basis: ElementSet, k: int, targets: Optional[ElementSet] = None) -> ElementSet:
        """Build the new basis from `basis`."""
        pass

    @abstractmethod
    def targets(self, basis: ElementSet, k: int) -> ElementSet:
        """The set the constructed basis is guaranteed to k-cover."""
        pass

    @abstractmethod
    def bound(self, n: int, k: int) -> float:
        """Published upper bound on the output size for an input of size n."""
        pass

    def lower_bound(self, n: int, k: int) -> Optional[float]:
        """Known lower bound on the best output size, when there is one."""
        return None

    def size_parameter(self, basis: ElementSet) -> int:
        """The n the bound is stated in."""
        return len(basis)

    def diagnostics(self, basis: ElementSet, k: int) -> Dict[str, Any]:
        """Extra per-run figures for reports; empty unless a construction has any."""
        return {}

    def certify(
        self,
        basis: ElementSet,
        k: int,
        output: Optional[ElementSet] = None,
        targets: Optional[ElementSet] = None,
    ) -> Tuple[bool, Dict]:
        """
        Build (unless given) and check coverage of the guaranteed targets.

        Returns:
            Tuple of (covered, certificate map) as returned by is_k_basis
        """
        if targets is None:
            targets = self.targets(basis, k)
        if output is None:
            output = self.build(basis, k, targets)
        return is_k_basis(output, targets, k)


def certificate_list(certificates: Dict) -> Tuple[SumCertificate, ...]:
    return tuple(certificates[a] for a in sorted(certificates) if certificates[a] is not None)

