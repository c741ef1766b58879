"""One entry point per quantity, dispatching on the evaluation method."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union

from . import biorthogonal as bo
from . import correlations as co
from . import homogeneous as hg
from . import oracle_algebraic as oa
from . import oracle_enumeration as oe
from . import tsuchiya as ts
from .errors import ConfigInvalid
from .homogeneous import HomogeneousPoint
from .weights import ModelParameters

ORACLE_REFERENCE_CAP = 6


class Method(str, Enum):
    AUTO = "auto"
    DETERMINANT = "determinant"
    RECURSION = "recursion"
    ORACLE = "oracle"
    ENUMERATION = "enumeration"
    HOMOGENEOUS = "homogeneous"
    BIORTHOGONAL = "biorthogonal"


class Quantity(str, Enum):
    Z = "Z"
    G = "G"
    H = "H"
    F = "F"


Model = Union[ModelParameters, HomogeneousPoint]


def as_params(model: Model) -> ModelParameters:
    return model.params() if isinstance(model, HomogeneousPoint) else model


def as_point(model: Model) -> HomogeneousPoint:
    if isinstance(model, HomogeneousPoint):
        return model
    if len(set(model.lambdas)) == 1 and len(set(model.mus)) == 1:
        return HomogeneousPoint(model.lambdas[0], model.mus[0], model.eta, model.xi, model.N)
    raise ConfigInvalid("jet and polynomial formulas need a homogeneous point")


def resolve(method: Method | str, model: Model) -> Method:
    method = Method(method)
    if method is not Method.AUTO:
        return method
    return Method.HOMOGENEOUS if isinstance(model, HomogeneousPoint) else Method.DETERMINANT


def reference_for(method: Method, model: Model) -> Method | None:
    """Cross-check used by ``auto``: the operator oracle while it is cheap."""
    if method is Method.ORACLE or as_params(model).N > ORACLE_REFERENCE_CAP:
        return None
    return Method.ORACLE


def _by_params(method):
    table = {
        Method.DETERMINANT: (lambda p: ts.z_det(p).value, co.g_det, co.h_det, co.f_sum),
        Method.RECURSION: (ts.z_recursion_sum, co.g_recursion, co.h_recursion, co.f_recursion),
        Method.ORACLE: (oa.z_oracle, oa.g_oracle, oa.h_oracle, oa.f_oracle),
        Method.ENUMERATION: (oe.enumerate_partition, oe.enumerate_g, oe.enumerate_h, oe.enumerate_efp),
    }
    return table.get(method)


def _by_point(method):
    table = {
        Method.HOMOGENEOUS: (hg.z_hom, hg.g_hom, hg.h_hom, hg.f_hom),
        Method.BIORTHOGONAL: (bo.z_poly, bo.g_poly, bo.h_poly, bo.f_poly),
    }
    return table.get(method)


def evaluate(quantity: Quantity | str, model: Model, method: Method | str = Method.AUTO, r=None, s=None) -> complex:
    quantity = Quantity(quantity)
    method = resolve(method, model)
    slot = list(Quantity).index(quantity)
    if quantity is not Quantity.Z and r is None:
        raise ConfigInvalid(f"{quantity.value} needs r")
    if quantity is Quantity.F and s is None:
        raise ConfigInvalid("F needs s")
    args = {Quantity.Z: (), Quantity.G: (r,), Quantity.H: (r,), Quantity.F: (r, s)}[quantity]
    fns = _by_params(method)
    if fns is not None:
        if method is Method.RECURSION and quantity is Quantity.Z and as_params(model).N == 1:
            return ts.z_det(as_params(model)).value
        return complex(fns[slot](as_params(model), *args))
    point = as_point(model)
    return complex(_by_point(method)[slot](point, point.N, *args))


@dataclass(frozen=True)
class CorrelationRequest:
    """A single (r, s) evaluation; ``s`` is only used for F."""

    model: Model
    r: int
    s: int | None = None
    method: Method = Method.AUTO

    def evaluate(self, quantity: Quantity | str) -> complex:
        return evaluate(quantity, self.model, self.method, self.r, self.s)
