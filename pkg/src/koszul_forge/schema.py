"""JSON payload schemas for algebras, presentations and graphs."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .free_algebra import NcPoly, parse_poly
from .gf import is_prime
from .graphs import Graph
from .groups import GroupPresentation
from .quadratic import QuadraticAlgebra, make_quadratic


class _Payload(BaseModel):
    model_config = ConfigDict(extra="forbid")


class AlgebraPayload(_Payload):
    p: int
    d: int = Field(ge=0)
    relators: list[str] = Field(default_factory=list)

    @field_validator("p")
    @classmethod
    def _prime(cls, p):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        return p

    def polys(self) -> list[NcPoly]:
        """Relators as homogeneous polynomials of any degree >= 2."""
        out = [parse_poly(r, self.p, self.d) for r in self.relators]
        for f in out:
            if not f.is_zero() and (not f.is_homogeneous() or f.degree() < 2):
                raise ValueError(f"relator {f} is not homogeneous of degree >= 2")
        return out

    def build(self) -> QuadraticAlgebra:
        return make_quadratic(self.p, self.d, [parse_poly(r, self.p, self.d) for r in self.relators])

    @classmethod
    def of(cls, A: QuadraticAlgebra) -> AlgebraPayload:
        return cls(p=A.p, d=A.d, relators=A.relator_strings())


class CombinePayload(_Payload):
    left: AlgebraPayload
    right: AlgebraPayload


class PresentationPayload(_Payload):
    p: int
    d: int = Field(ge=0)
    relators: list[str] = Field(default_factory=list)

    @field_validator("p")
    @classmethod
    def _prime(cls, p):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        return p

    def build(self) -> GroupPresentation:
        return GroupPresentation.parse(self.p, self.d, self.relators)

    @classmethod
    def of(cls, G: GroupPresentation) -> PresentationPayload:
        return cls(p=G.p, d=G.d, relators=G.relator_strings())


class GraphPayload(_Payload):
    n: int = Field(ge=0)
    edges: list[tuple[int, int]] = Field(default_factory=list)

    def build(self) -> Graph:
        return Graph(self.n, self.edges)

    @classmethod
    def of(cls, G: Graph) -> GraphPayload:
        return cls(n=G.n, edges=G.sorted_edges())


def dump(payload: BaseModel) -> dict:
    return payload.model_dump(mode="json")
