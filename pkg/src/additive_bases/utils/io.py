import json
from dataclasses import fields, is_dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from pydantic import ValidationError

from ..errors import InputFormatError
from ..sumsets import ElementSet


def read_json(path: str) -> Any:
    """
    Read and parse a JSON file.

    Args:
        path: Path to the JSON file

    Returns:
        The parsed document

    Raises:
        FileNotFoundError: If the file does not exist
        InputFormatError: If the file is not valid JSON
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Input file not found: {path}")

    try:
        with open(path, "r") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InputFormatError(f"Malformed JSON in {path}: {e}")


def load_element_set(path: str, key: Optional[str] = None) -> ElementSet:
    """
    Load an ElementSet from a JSON array of scalar strings.

    An object is accepted too when it holds the array under `key`
    (or under "A" / "basis" when no key is given).
    """
    document = read_json(path)
    if isinstance(document, dict):
        for candidate in ([key] if key else ["basis", "A"]):
            if candidate in document:
                document = document[candidate]
                break
        else:
            raise InputFormatError(f"{path} has no element array")
    return ElementSet.coerce(document)


def load_model(path: str, model_class):
    """Validate a JSON file against a pydantic model, mapping failures to InputFormatError."""
    document = read_json(path)
    try:
        return model_class.model_validate(document)
    except ValidationError as e:
        raise InputFormatError(f"Invalid {model_class.__name__} in {path}: {e}")


def to_jsonable(value: Any) -> Any:
    """Convert models, sets and fractions into plain JSON values."""
    if hasattr(value, "model_dump"):
        return value.model_dump(mode="json", by_alias=True)
    if isinstance(value, ElementSet):
        return value.to_json()
    if is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in fields(value)}
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, Fraction):
        return str(value)
    return value


def dumps(document: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent."""
    return json.dumps(to_jsonable(document), indent=2, sort_keys=True)


def write_json(document: Any, path: str) -> None:
    path = Path(path)
    path.parent.mkdir(exist_ok=True, parents=True)
    with open(path, "w") as f:
        f.write(dumps(document))
        f.write("\n")
