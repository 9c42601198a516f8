import json
import os
import tempfile
from fractions import Fraction as F

import pytest

from additive_bases.errors import InputFormatError
from additive_bases.solver import BasisInstance, Domain
from additive_bases.sumsets import ElementSet, SumCertificate
from additive_bases.utils.io import dumps, load_element_set, load_model, read_json, to_jsonable, write_json
from additive_bases.vector_model import CoordinateSubspace


class TestReadJson:
    def test_missing_file(self):
        with pytest.raises(FileNotFoundError):
            read_json("/nonexistent/path/basis.json")

    def test_malformed_file(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            path = os.path.join(temp_dir, "bad.json")
            with open(path, "w") as f:
                f.write("[1, 2")
            with pytest.raises(InputFormatError):
                read_json(path)


class TestLoadElementSet:
    def test_array_and_objects(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            array_path = os.path.join(temp_dir, "array.json")
            object_path = os.path.join(temp_dir, "object.json")
            with open(array_path, "w") as f:
                json.dump(["1/2", "-3"], f)
            with open(object_path, "w") as f:
                json.dump({"A": ["4"], "basis": ["1", "2"]}, f)

            assert load_element_set(array_path) == ElementSet(["-3", "1/2"])
            assert load_element_set(object_path) == ElementSet([1, 2])
            assert load_element_set(object_path, key="A") == ElementSet([4])

    def test_rejects_bad_documents(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            path = os.path.join(temp_dir, "bad.json")
            for document in ({"other": []}, "12", ["1.5"]):
                with open(path, "w") as f:
                    json.dump(document, f)
                with pytest.raises(InputFormatError):
                    load_element_set(path)


class TestLoadModel:
    def test_valid_instance(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            path = os.path.join(temp_dir, "instance.json")
            with open(path, "w") as f:
                json.dump({"k": 3, "domain": "Q", "A": ["1/3"], "denominator": 3}, f)
            instance = load_model(path, BasisInstance)
            assert instance.domain == Domain.SCALED_RATIONALS
            assert instance.denominator == 3

    def test_invalid_instance(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            path = os.path.join(temp_dir, "instance.json")
            with open(path, "w") as f:
                json.dump({"k": "two", "A": []}, f)
            with pytest.raises(InputFormatError):
                load_model(path, BasisInstance)


class TestSerialization:
    def test_to_jsonable(self):
        document = {
            "value": F(-2, 6),
            "set": ElementSet([2, "1/2"]),
            "cert": SumCertificate(target=3, parts=(1, 2)),
            "subspace": CoordinateSubspace(n=3, indices=(0, 2)),
            "domain": Domain.INTEGERS,
            1: (F(1), 2),
        }
        assert to_jsonable(document) == {
            "value": "-1/3",
            "set": ["1/2", "2"],
            "cert": {"target": "3", "parts": ["1", "2"]},
            "subspace": {"n": 3, "indices": [0, 2]},
            "domain": "Z",
            "1": ["1", 2],
        }

    def test_dumps_sorts_keys(self):
        assert dumps({"b": 1, "a": F(1, 2)}) == '{\n  "a": "1/2",\n  "b": 1\n}'

    def test_write_json_creates_directories(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            path = os.path.join(temp_dir, "nested", "out.json")
            write_json({"set": ElementSet([1])}, path)
            with open(path) as f:
                assert json.load(f) == {"set": ["1"]}
