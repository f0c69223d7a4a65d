"""Shared builders for the reference systems, cached per session.

Presentations are pure values and every consumer treats them as
read-only, so building each (system, extension) pair once keeps the
suite fast without weakening any assertion.
"""

import functools

from pvkit.arith.cyclo import CycloField, CycloNum
from pvkit.base import DiffField, SigmaSpec
from pvkit.engine import build_pv_diagonal, build_pv_scalar, build_pv_unipotent
from pvkit.groups import ConstantsExtensionDesc, base_change


def _shift(conductor=1):
    return DiffField(SigmaSpec.shift(), CycloField(conductor))


def _qshift(q, conductor=1, var="x"):
    return DiffField(SigmaSpec.qshift(q), CycloField(conductor), var)


def _scalar_order_two():
    k = _shift()
    return build_pv_scalar(k, -k.one())


def _triangular_free_corner():
    k = _qshift(2)
    return build_pv_unipotent(k, k.one())


def _q_scalar_order_two():
    k = _qshift(2, var="s")
    return build_pv_scalar(k, k.coerce(-2))


def _diagonal_pair():
    k = _shift()
    x = k.x()
    return build_pv_diagonal(k, [-k.one(), -(x + 1) / x])


def _zeta3_twisted_shift():
    k = _shift(conductor=3)
    x = k.x()
    return build_pv_scalar(k, k.coerce(CycloNum.zeta(3)) * (x + 1) / x)


def _order_three():
    k = _qshift(8)
    return build_pv_scalar(k, k.coerce(2))


def _square_root_of_x():
    z = CycloNum.zeta(8)
    k = _qshift(2, conductor=8)
    return build_pv_scalar(k, k.coerce(z + z ** 7))


_BUILDERS = {
    "scalar-order-two": _scalar_order_two,
    "triangular-free-corner": _triangular_free_corner,
    "q-scalar-order-two": _q_scalar_order_two,
    "diagonal-pair": _diagonal_pair,
    "zeta3-twisted-shift": _zeta3_twisted_shift,
    "order-three": _order_three,
    "square-root-of-x": _square_root_of_x,
}

REGISTRY = tuple(_BUILDERS)

EXTENSIONS = {
    "zeta3": ConstantsExtensionDesc.adjoin_root_of_unity(3),
    "t1": ConstantsExtensionDesc.adjoin_transcendental(1),
}


@functools.lru_cache(maxsize=None)
def presentation(name):
    return _BUILDERS[name]()


@functools.lru_cache(maxsize=None)
def changed_presentation(name, ext_key):
    return base_change(presentation(name), EXTENSIONS[ext_key])
