"""Shared test helpers: hand-computed oracles and the randomized
configuration generator used by the equivalence and transparency suites."""

from __future__ import annotations

import random

from gendispatch import (
    CLASSES,
    NIL,
    AcceptGenericFunction,
    AcceptSpecializer,
    ClassSpecializer,
    Cons,
    ConsGenericFunction,
    ConsSpecializer,
    EqlSpecializer,
    GenericFunction,
    Method,
    NoApplicableMethod,
    Request,
    SignumGenericFunction,
    SignumSpecializer,
    cons_list,
    intern,
)


def fact_oracle(n: int) -> int:
    """Iterative product, independent of the dispatch implementation."""
    result = 1
    for k in range(2, n + 1):
        result *= k
    return result


# walker fixtures with hand-traced expectations, in source order
WALKER_FIXTURES = [
    ("(let ((x 1)) x)", []),
    ("(let ((x 1)) 2)", [("unused-binding", "x")]),
    ("(lambda (x) y)", [("unused-binding", "x"), ("unbound-variable", "y")]),
    ("(let ((x 1)) (+ x x))", []),
    ("((f) y)", [("unbound-variable", "y")]),
    ("(lambda (x) (lambda (y) x))", [("unused-binding", "y")]),
]


def diagnostic_pairs(diagnostics):
    return [(d.kind, d.variable.name) for d in diagnostics]


# -- randomized dispatch configurations

_CLASS_NAMES = ["t", "number", "real", "integer", "float", "symbol", "null", "cons", "list", "string"]
_HEAD_SYMBOLS = ["f", "g", "let", "lambda", "quux"]
_MEDIA_TYPES = ["text/html", "application/xml", "text/plain", "image/png", "video/mp4"]
_SIGNUM_VALUES = [-1, 0, 1, -1.0, 0.0, 1.0]

_GF_KINDS = {
    "standard": GenericFunction,
    "cons": ConsGenericFunction,
    "signum": SignumGenericFunction,
    "accept": AcceptGenericFunction,
}

HEADER_RANGES = ["text/html", "application/xml", "text/plain", "text/*", "*/*", "image/png", "application/*"]
HEADER_QS = [None, "0", "0.1", "0.3", "0.5", "0.8", "0.9", "1"]


def random_header(rng: random.Random) -> str:
    parts = []
    for _ in range(rng.randint(1, 4)):
        media = rng.choice(HEADER_RANGES)
        q = rng.choice(HEADER_QS)
        parts.append(media if q is None else "%s;q=%s" % (media, q))
    return ", ".join(parts)


def random_value(rng: random.Random, kind: str):
    if kind == "signum" and rng.random() < 0.5:
        return rng.choice([-3, -1, 0, 1, 7, 20, -2.5, -1.0, 0.0, 1.0, 2.5])
    if kind == "cons" and rng.random() < 0.5:
        head = rng.choice(_HEAD_SYMBOLS + [1])  # sometimes a non-symbol car
        head = intern(head) if isinstance(head, str) else head
        return cons_list(head, rng.randint(0, 3))
    if kind == "accept" and rng.random() < 0.5:
        header = random_header(rng)
        if rng.random() < 0.5:
            return Request("GET", "/", {"Accept": header})
        return header
    pick = rng.random()
    if pick < 0.25:
        return rng.randint(-3, 8)
    if pick < 0.4:
        return rng.choice([-2.5, -1.0, 0.0, 1.0, 2.5])
    if pick < 0.55:
        return rng.choice(["x", "hello", "text/html"])
    if pick < 0.75:
        return intern(rng.choice(_HEAD_SYMBOLS + ["x", "y"]))
    if pick < 0.85:
        return NIL
    return Cons(rng.choice([intern("f"), 3]), cons_list(rng.randint(0, 2)))


def random_specializer(rng: random.Random, kind: str):
    roll = rng.random()
    if kind == "cons" and roll < 0.35:
        return ConsSpecializer(intern(rng.choice(_HEAD_SYMBOLS)))
    if kind == "signum" and roll < 0.35:
        return SignumSpecializer(rng.choice(_SIGNUM_VALUES))
    if kind == "accept" and roll < 0.35:
        return AcceptSpecializer(rng.choice(_MEDIA_TYPES))
    if roll < 0.75:
        return ClassSpecializer(CLASSES[rng.choice(_CLASS_NAMES)])
    return EqlSpecializer(random_value(rng, kind))


def _labelled_body(label):
    def body(args, _next):
        return label

    return body


def random_config(rng: random.Random, cache: str = "auto", calls: int = 1):
    """One random generic function plus `calls` argument lists for it."""
    kind = rng.choice(list(_GF_KINDS))
    nargs = rng.choice([1, 1, 1, 2])
    gf = _GF_KINDS[kind]("probe", nargs, cache=cache)
    for label in range(rng.randint(1, 5)):
        specializers = [random_specializer(rng, kind) for _ in range(nargs)]
        gf.add_method(Method(specializers, _labelled_body(label)))
    arglists = [[random_value(rng, kind) for _ in range(nargs)] for _ in range(calls)]
    return gf, arglists


def invoke_outcome(gf, args):
    try:
        return gf.invoke(args)
    except NoApplicableMethod:
        return "no-applicable-method"
