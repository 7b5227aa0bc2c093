from fractions import Fraction

import pytest
from pydantic import ValidationError

from services.clifford import Multivector
from services.vahlen import CliffMat2, generator_matrices
from services.weyl_enumeration import enumerate_weyl
from utils.errors import AlgebraError
from utils.serialization import (
    CliffMat2Model,
    ExtensionSpecModel,
    IsometryModel,
    MultivectorModel,
    QuadSpaceModel,
    cliffmat2_to_dict,
    dump_json,
    dumps,
    load_matrix,
    load_space,
    weyl_element_to_dict,
)

A2_GRAM = {"gram": [["1", "-1/2"], ["-1/2", "1"]]}


class TestQuadSpaceModel:
    def test_parse(self, a2_base):
        assert QuadSpaceModel.model_validate(A2_GRAM).to_space() == a2_base
        assert QuadSpaceModel(gram=[[2, 0], [0, "1/3"]]).to_space().gram[1][1] == Fraction(1, 3)

    def test_not_square(self):
        with pytest.raises(ValidationError):
            QuadSpaceModel.model_validate({"gram": [["1", "0"]]})

    def test_bad_rational(self):
        with pytest.raises(ValidationError):
            QuadSpaceModel.model_validate({"gram": [["0.5"]]})

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            QuadSpaceModel(dim=3, **A2_GRAM).to_space()

    def test_from_space(self, a2_base):
        assert QuadSpaceModel.from_space(a2_base).model_dump() == {"dim": 2, **A2_GRAM}


class TestMultivectorModel:
    def test_blade_keys(self, a2_base):
        x = MultivectorModel(terms={"": "1", "0": 2, "0,1": "-1/2"}).to_multivector(a2_base)
        expected = Multivector(a2_base, {0: 1, 1: 2, 3: Fraction(-1, 2)})
        assert x == expected
        assert MultivectorModel.from_multivector(expected).terms == {"": "1", "0": "2", "0,1": "-1/2"}

    def test_descending_key_rejected(self, a2_base):
        with pytest.raises(AlgebraError):
            MultivectorModel(terms={"1,0": 1}).to_multivector(a2_base)

    def test_space_required(self):
        with pytest.raises(ValueError):
            MultivectorModel(terms={"": 1}).to_multivector()


class TestMatrices:
    def test_generator_dict(self, a2_ext):
        X = generator_matrices(a2_ext)[0]
        assert cliffmat2_to_dict(X) == {"a": {}, "b": {"": "1"}, "c": {"": "-1"}, "d": {}}
        assert cliffmat2_to_dict(X, include_space=True)["space"]["dim"] == 2

    def test_embedded_space(self, a2_base):
        model = CliffMat2Model.model_validate({"space": A2_GRAM, "a": {"": 1}, "b": {}, "c": {}, "d": {"": 1}})
        assert model.to_matrix() == CliffMat2.identity(a2_base)

    def test_load_files(self, tmp_path, a2_base):
        space_file = tmp_path / "v.json"
        matrix_file = tmp_path / "x.json"
        dump_json(A2_GRAM, str(space_file))
        dump_json({"a": {"0": "1"}, "b": {}, "c": {}, "d": {"0": "-1"}}, str(matrix_file))
        space = load_space(str(space_file))
        A = load_matrix(str(matrix_file), space)
        assert A.a == Multivector.generator(a2_base, 0)

    def test_isometry_must_preserve_form(self, a2_base):
        with pytest.raises(AlgebraError):
            IsometryModel(matrix=[[2, 0], [0, 1]]).to_isometry(a2_base)


class TestCanonicalOutput:
    def test_dumps_is_stable(self, b3_ext):
        model = ExtensionSpecModel.from_extension(b3_ext)
        first = dumps(model)
        assert first == dumps(ExtensionSpecModel.from_extension(b3_ext))
        assert first.endswith("}\n")
        assert '  "name": "B3++"' in first

    def test_extension_fields(self, b3_ext):
        data = ExtensionSpecModel.from_extension(b3_ext).model_dump()
        assert data["cartan"]["labels"] == ["-1", "0", "1", "2", "3"]
        assert data["cartan"]["entries"][4] == [0, 0, 0, -2, 2]
        assert data["theta"] == [1, 2, 2]
        assert data["m"] == 4
        assert data["gram"][3][4] == "-1/2"

    def test_weyl_element(self, a1_ext):
        element = enumerate_weyl(a1_ext, 1)[1]
        out = weyl_element_to_dict(element)
        assert out["word"] == [0] and out["length"] == 1
        assert out["lambda"] == "1" and out["spinor_class"] == 1 and out["o_plus"] is True
        assert out["vahlen"] == {"a": {}, "b": {"": "1"}, "c": {"": "-1"}, "d": {}}
