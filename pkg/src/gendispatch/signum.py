"""Dispatch on the sign of a number, and the three-method factorial that
motivates it: one method for sign 0, one for sign 1.
"""

from __future__ import annotations

from .model import class_of
from .core import ClassGeneralizer, Generalizer, GenericFunction, Method, Specializer


def signum(x):
    """Sign of a real number, preserving its numeric kind."""
    cls = x.__class__
    if cls is int:
        return 1 if x > 0 else (-1 if x < 0 else 0)
    if cls is float:
        return 1.0 if x > 0 else (-1.0 if x < 0 else 0.0)
    raise TypeError("signum of a non-real: %r" % (x,))


def _is_real(x) -> bool:
    cls = x.__class__
    return cls is int or cls is float


class SignumSpecializer(Specializer):
    """Accepts reals whose signum equals the stored one under numeric =."""

    def __init__(self, value):
        if not _is_real(value) or signum(value) != value:
            raise ValueError("not a signum value: %r" % (value,))
        self.value = value

    def accepts(self, obj) -> bool:
        return _is_real(obj) and signum(obj) == self.value

    def __eq__(self, other):
        # numeric comparison: (signum 1) and (signum 1.0) are one specializer
        return isinstance(other, SignumSpecializer) and self.value == other.value

    def __repr__(self):
        return "(signum %s)" % (self.value,)


class SignumGeneralizer(Generalizer):
    """Carries the type-preserving signum of the argument, so integer and
    float arguments of equal sign share methods but not cache entries."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def __repr__(self):
        return "(signum-generalizer %s)" % (self.value,)


class SignumGenericFunction(GenericFunction):
    kind = "signum"

    def generalizer_of(self, arg, position: int = 0):
        cls = arg.__class__
        if cls is int:
            return SignumGeneralizer(1 if arg > 0 else (-1 if arg < 0 else 0))
        if cls is float:
            return SignumGeneralizer(1.0 if arg > 0 else (-1.0 if arg < 0 else 0.0))
        return super().generalizer_of(arg, position)

    def generalizer_hash_key(self, g):
        if isinstance(g, SignumGeneralizer):
            return g.value
        return super().generalizer_hash_key(g)

    def specializer_accepts_generalizer(self, s, g):
        if isinstance(g, SignumGeneralizer):
            if isinstance(s, SignumSpecializer):
                return (s.value == g.value, True)
            # other specializer kinds see the argument through the class of
            # its signum, which for reals is the class of the argument itself
            return self.specializer_accepts_generalizer(
                s, ClassGeneralizer(class_of(g.value))
            )
        if isinstance(s, SignumSpecializer):
            # reals always generalize to a SignumGeneralizer here, so any
            # other generalizer kind excludes sign methods outright
            return (False, True)
        return super().specializer_accepts_generalizer(s, g)

    def _ordering_precedence_list(self, g):
        if isinstance(g, SignumGeneralizer):
            return class_of(g.value).precedence_list
        return super()._ordering_precedence_list(g)


def make_fact(cache: str = "auto") -> SignumGenericFunction:
    """The factorial generic function: (signum 0) => 1, (signum 1) => n*(n-1)!."""
    fact = SignumGenericFunction("fact", 1, cache=cache)

    def base_case(args, _next):
        return 1

    def general_case(args, _next):
        n = args[0]
        return n * fact(n - 1)

    fact.add_method(Method([SignumSpecializer(0)], base_case))
    fact.add_method(Method([SignumSpecializer(1)], general_case))
    return fact
