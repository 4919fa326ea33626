"""S-expression reader tests."""

from __future__ import annotations

import random

import pytest

from gendispatch import NIL, Cons, ParseError, cons_list, format_value, intern, read_sexpr


def test_reads_atoms() -> None:
    assert read_sexpr("42") == 42
    assert read_sexpr("-7") == -7
    assert read_sexpr("2.5") == 2.5
    assert read_sexpr("1e3") == 1000.0
    assert read_sexpr("foo") is intern("foo")
    assert read_sexpr("FOO") is intern("foo")
    assert read_sexpr('"hi"') == "hi"
    assert read_sexpr(r'"a\"b"') == 'a"b'


def test_reads_lists() -> None:
    assert read_sexpr("()") is NIL
    assert read_sexpr("nil") is NIL
    form = read_sexpr("(let ((x 1)) x)")
    assert isinstance(form, Cons)
    assert form.car is intern("let")
    assert format_value(form) == "(let ((x 1)) x)"


def test_whitespace_and_newlines() -> None:
    form = read_sexpr("(a\n  b\t c)")
    assert format_value(form) == "(a b c)"


def test_empty_input_is_an_error() -> None:
    with pytest.raises(ParseError):
        read_sexpr("")
    with pytest.raises(ParseError):
        read_sexpr("   \n ")


def test_trailing_garbage_is_an_error() -> None:
    with pytest.raises(ParseError):
        read_sexpr("(a) b")


def test_unterminated_list_reports_open_position() -> None:
    with pytest.raises(ParseError) as err:
        read_sexpr("  (a (b)")
    assert err.value.position == 2


def test_unterminated_string_is_an_error() -> None:
    with pytest.raises(ParseError):
        read_sexpr('"abc')


def test_stray_close_paren_is_an_error() -> None:
    with pytest.raises(ParseError):
        read_sexpr(")")


def test_round_trip_random_forms() -> None:
    # print then re-read is identity for symbols, integers, and proper lists
    rng = random.Random(11)
    symbols = [intern(s) for s in ("a", "b", "foo", "let", "x1")]

    def gen(depth: int):
        roll = rng.random()
        if depth > 3 or roll < 0.3:
            return rng.choice(symbols)
        if roll < 0.5:
            return rng.randint(-100, 100)
        if roll < 0.55:
            return NIL
        return cons_list(*[gen(depth + 1) for _ in range(rng.randint(0, 4))])

    for _ in range(200):
        form = gen(0)
        text = format_value(form)
        back = read_sexpr(text)
        assert format_value(back) == text
