"""
JSON file formats for spaces, multivectors, Vahlen matrices, isometries and
extensions. Rationals travel as "p/q" strings; output is canonical so the same
input always gives byte-identical text.
"""

import json
from fractions import Fraction
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, field_validator

from services.cartan import CartanMatrix, ExtensionSpec
from services.clifford import Multivector, blade_indices, blade_mask
from services.exactform import Isometry, QuadSpace
from services.vahlen import CliffMat2
from services.weyl_enumeration import WeylElement
from utils.rational import format_rational, format_rows, format_vector, parse_rational

Rational = Union[str, int]


def _rational(value: Rational) -> Fraction:
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    return parse_rational(value)


# ===========================
# Models
# ===========================

class QuadSpaceModel(BaseModel):
    dim: Optional[int] = None
    gram: List[List[Rational]]

    @field_validator("gram")
    @classmethod
    def _square(cls, gram):
        if any(len(row) != len(gram) for row in gram):
            raise ValueError("gram must be a square matrix")
        for row in gram:
            for x in row:
                _rational(x)
        return gram

    def to_space(self) -> QuadSpace:
        if self.dim is not None and self.dim != len(self.gram):
            raise ValueError(f"dim {self.dim} does not match a {len(self.gram)}x{len(self.gram)} gram")
        return QuadSpace.from_rows([[_rational(x) for x in row] for row in self.gram])

    @classmethod
    def from_space(cls, space: QuadSpace) -> "QuadSpaceModel":
        return cls(dim=space.dim, gram=format_rows(space.gram))


def _blade_key(mask: int) -> str:
    return ",".join(str(i) for i in blade_indices(mask))


def _parse_blade_key(key: str) -> int:
    key = key.strip()
    if not key:
        return 0
    return blade_mask(int(part) for part in key.split(","))


class MultivectorModel(BaseModel):
    """terms: {"": "1", "0": "2", "0,2": "-1/2"}; keys are ascending generator indices."""

    space: Optional[QuadSpaceModel] = None
    terms: Dict[str, Rational]

    def to_multivector(self, space: Optional[QuadSpace] = None) -> Multivector:
        if space is None:
            if self.space is None:
                raise ValueError("multivector needs a space")
            space = self.space.to_space()
        return Multivector(space, {_parse_blade_key(k): _rational(v) for k, v in self.terms.items()})

    @classmethod
    def from_multivector(cls, x: Multivector, include_space: bool = False) -> "MultivectorModel":
        terms = {_blade_key(mask): format_rational(c) for mask, c in x.sorted_terms()}
        return cls(space=QuadSpaceModel.from_space(x.space) if include_space else None, terms=terms)


class CliffMat2Model(BaseModel):
    space: Optional[QuadSpaceModel] = None
    a: Dict[str, Rational]
    b: Dict[str, Rational]
    c: Dict[str, Rational]
    d: Dict[str, Rational]

    def to_matrix(self, space: Optional[QuadSpace] = None) -> CliffMat2:
        if space is None:
            if self.space is None:
                raise ValueError("matrix needs a space")
            space = self.space.to_space()
        entries = [MultivectorModel(terms=t).to_multivector(space) for t in (self.a, self.b, self.c, self.d)]
        return CliffMat2(*entries)

    @classmethod
    def from_matrix(cls, A: CliffMat2, include_space: bool = False) -> "CliffMat2Model":
        a, b, c, d = (MultivectorModel.from_multivector(x).terms for x in A.entries())
        return cls(space=QuadSpaceModel.from_space(A.space) if include_space else None, a=a, b=b, c=c, d=d)


class CartanMatrixModel(BaseModel):
    labels: List[str]
    entries: List[List[int]]

    @classmethod
    def from_cartan(cls, C: CartanMatrix) -> "CartanMatrixModel":
        return cls(labels=list(C.labels), entries=[list(row) for row in C.entries])


class ExtensionSpecModel(BaseModel):
    name: str
    cartan: CartanMatrixModel
    gram: List[List[str]]
    simple_roots: List[List[str]]
    theta: List[int]
    m: int

    @classmethod
    def from_extension(cls, ext: ExtensionSpec) -> "ExtensionSpecModel":
        return cls(
            name=ext.name,
            cartan=CartanMatrixModel.from_cartan(ext.cartan),
            gram=format_rows(ext.W.gram),
            simple_roots=format_rows(ext.simple_roots),
            theta=list(ext.theta),
            m=ext.m,
        )


class IsometryModel(BaseModel):
    space: Optional[QuadSpaceModel] = None
    matrix: List[List[Rational]]

    def to_isometry(self, space: Optional[QuadSpace] = None) -> Isometry:
        if space is None:
            if self.space is None:
                raise ValueError("isometry needs a space")
            space = self.space.to_space()
        return Isometry(space, tuple(tuple(_rational(x) for x in row) for row in self.matrix))

    @classmethod
    def from_isometry(cls, sigma: Isometry, include_space: bool = False) -> "IsometryModel":
        return cls(
            space=QuadSpaceModel.from_space(sigma.space) if include_space else None,
            matrix=format_rows(sigma.matrix),
        )


# ===========================
# Helpers
# ===========================

def cliffmat2_to_dict(A: CliffMat2, include_space: bool = False) -> Dict[str, Any]:
    return CliffMat2Model.from_matrix(A, include_space).model_dump(exclude_none=True)


def weyl_element_to_dict(element: WeylElement) -> Dict[str, Any]:
    return {
        "word": list(element.word),
        "length": element.length,
        "isometry": format_rows(element.isometry.matrix),
        "vahlen": cliffmat2_to_dict(element.vahlen),
        "lambda": format_rational(element.lam),
        "spinor_class": int(element.spinor_class),
        "o_plus": element.o_plus,
    }


def word_labels(ext: ExtensionSpec, word) -> List[str]:
    return [ext.labels[i] for i in word]


def dumps(data: Any) -> str:
    """Canonical JSON: indent=2, keys in insertion order, trailing newline."""
    if isinstance(data, BaseModel):
        data = data.model_dump(exclude_none=True)
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def dump_json(data: Any, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(data))


def load_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def load_space(path: str) -> QuadSpace:
    return QuadSpaceModel.model_validate(load_json(path)).to_space()


def load_matrix(path: str, space: Optional[QuadSpace] = None) -> CliffMat2:
    return CliffMat2Model.model_validate(load_json(path)).to_matrix(space)


def load_isometry(path: str, space: Optional[QuadSpace] = None) -> Isometry:
    return IsometryModel.model_validate(load_json(path)).to_isometry(space)


def format_vectors(vectors) -> List[List[str]]:
    return [format_vector(v) for v in vectors]
