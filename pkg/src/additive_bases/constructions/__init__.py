from .base_construction import BaseConstruction
from .dyadic import DyadicConstruction
from .higher_order import HigherOrderConstruction, NaturalConstruction
from .rounding import RoundingConstruction


CONSTRUCTIONS = {
    "round": RoundingConstruction,
    "dyadic": DyadicConstruction,
    "higher": HigherOrderConstruction,
    "natural": NaturalConstruction,
}


def get_construction(name: str) -> BaseConstruction:
    """
    Instantiate a construction by its CLI name.

    Raises:
        KeyError: If the name is unknown
    """
    if name not in CONSTRUCTIONS:
        raise KeyError(f"Unknown construction {name!r}; available: {', '.join(CONSTRUCTIONS)}")
    return CONSTRUCTIONS[name]()
