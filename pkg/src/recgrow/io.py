"""Serialization: rationals as "p/q" strings, polynomials as ascending
arrays, rational functions as {num, den} objects (JSON) or tables (TOML)."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from .arith import Poly, RatFunc

__all__ = [
    "format_rational",
    "parse_rational",
    "parse_poly",
    "poly_to_json",
    "poly_from_json",
    "ratfunc_to_json",
    "ratfunc_from_json",
    "place_to_json",
    "place_from_json",
    "parse_place",
    "spec_to_dict",
    "spec_from_dict",
    "dumps_spec",
    "loads_spec",
    "load_spec",
    "load_document",
    "zannier_from_dict",
    "numfield_from_dict",
]

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def format_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(v: Any) -> Fraction:
    if isinstance(v, bool):
        raise ValueError(f"malformed rational: {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        m = _RATIONAL.match(v)
        if m:
            den = int(m.group(2)) if m.group(2) else 1
            if den == 0:
                raise ValueError(f"malformed rational (zero denominator): {v!r}")
            return Fraction(int(m.group(1)), den)
    raise ValueError(f"malformed rational: {v!r}")


_TERM = re.compile(
    r"^(?P<c>\d+(?:/\d+)?)?(?P<star>\*)?(?P<x>x(?:(?:\^|\*\*)(?P<e>\d+))?)?$")


def parse_poly(text: str) -> Poly:
    """Parse expressions like ``x^2+1``, ``3/2*x**3 - x``, ``2x - 5``."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    pieces = re.findall(r"[+-][^+-]+", s)
    if "".join(pieces) != s:
        raise ValueError(f"malformed polynomial: {text!r}")
    coeffs: dict[int, Fraction] = {}
    for piece in pieces:
        sign, body = (-1 if piece[0] == "-" else 1), piece[1:]
        m = _TERM.match(body)
        if not m or not (m.group("c") or m.group("x")) or (m.group("star") and not
                                                             (m.group("c") and m.group("x"))):
            raise ValueError(f"malformed polynomial term {body!r} in {text!r}")
        c = parse_rational(m.group("c")) if m.group("c") else Fraction(1)
        e = 0
        if m.group("x"):
            e = int(m.group("e")) if m.group("e") else 1
        coeffs[e] = coeffs.get(e, Fraction(0)) + sign * c
    top = max(coeffs)
    return Poly([coeffs.get(k, 0) for k in range(top + 1)])


def poly_to_json(p: Poly) -> list[str]:
    return [format_rational(c) for c in p.coeffs]


def poly_from_json(v: Any) -> Poly:
    if isinstance(v, str):
        return parse_poly(v)
    if not isinstance(v, list):
        raise ValueError(f"polynomial must be an array of rationals, got {v!r}")
    return Poly([parse_rational(c) for c in v])


def ratfunc_to_json(f: RatFunc) -> dict:
    return {"num": poly_to_json(f.num), "den": poly_to_json(f.den)}


def ratfunc_from_json(v: Any) -> RatFunc:
    if isinstance(v, dict):
        if "num" not in v:
            raise ValueError(f"rational function needs a 'num' entry: {v!r}")
        num = poly_from_json(v["num"])
        den = poly_from_json(v.get("den", ["1/1"]))
        return RatFunc(num, den)
    if isinstance(v, (list, str)):
        return RatFunc(poly_from_json(v))
    return RatFunc(parse_rational(v))


def place_to_json(place) -> Any:
    return "inf" if place.factor is None else poly_to_json(place.factor)


def place_from_json(v: Any):
    from .places import INFINITY, Place

    if v == "inf":
        return INFINITY
    return Place(poly_from_json(v).monic())


def parse_place(selector: str):
    """``inf``, ``point:<rational>`` or ``factor:<poly>``."""
    from .places import INFINITY, Place

    sel = selector.strip()
    if sel == "inf":
        return INFINITY
    if sel.startswith("point:"):
        return Place.point(parse_rational(sel[len("point:"):]))
    if sel.startswith("factor:"):
        p = parse_poly(sel[len("factor:"):])
        if p.is_constant():
            raise ValueError(f"place factor must have degree >= 1: {selector!r}")
        return Place(p.monic())
    raise ValueError(f"malformed place selector: {selector!r}")


# ---------------------------------------------------------------------------
# power-sum specs
# ---------------------------------------------------------------------------

def spec_to_dict(spec) -> dict:
    return {"terms": [
        {"alpha": ratfunc_to_json(t.alpha), "coeffs": [ratfunc_to_json(c) for c in t.coeffs]}
        for t in spec.terms
    ]}


def spec_from_dict(d: dict):
    from .recurrence import PowerSumSpec, Term

    terms = d.get("terms") if isinstance(d, dict) else None
    if not terms:
        raise ValueError("spec needs a non-empty 'terms' list")
    out = []
    for i, t in enumerate(terms):
        if "alpha" not in t or "coeffs" not in t:
            raise ValueError(f"term {i} needs 'alpha' and 'coeffs'")
        out.append(Term(tuple(ratfunc_from_json(c) for c in t["coeffs"]),
                        ratfunc_from_json(t["alpha"])))
    return PowerSumSpec(tuple(out))


def dumps_spec(spec, fmt: str = "json") -> str:
    d = spec_to_dict(spec)
    if fmt == "json":
        return json.dumps(d, indent=2) + "\n"
    if fmt == "toml":
        import tomli_w

        return tomli_w.dumps(d)
    raise ValueError(f"unknown format {fmt!r}")


def loads_spec(text: str, fmt: str = "json"):
    return spec_from_dict(_loads(text, fmt))


def _loads(text: str, fmt: str) -> Any:
    if fmt == "json":
        return json.loads(text)
    if fmt == "toml":
        import tomli

        return tomli.loads(text)
    raise ValueError(f"unknown format {fmt!r}")


def load_document(path) -> Any:
    path = Path(path)
    fmt = "toml" if path.suffix.lower() == ".toml" else "json"
    return _loads(path.read_text(), fmt)


def load_spec(path):
    return spec_from_dict(load_document(path))


# ---------------------------------------------------------------------------
# other inputs
# ---------------------------------------------------------------------------

def zannier_from_dict(d: dict):
    """``{"phis": [ratfunc, ...], "r": int, "S": ["inf" | poly, ...]}``"""
    from .bounds import PlaceSet, ZannierInstance

    try:
        phis = tuple(ratfunc_from_json(f) for f in d["phis"])
        r = int(d.get("r", 0))
        S = PlaceSet(tuple(place_from_json(p) for p in d["S"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed zannier instance: {exc}") from exc
    return ZannierInstance(phis, r, S)


def numfield_from_dict(d: dict) -> dict:
    """Validated fields of ``{char_coeffs, initial_terms, epsilon, n_max,
    precision_bits}``; epsilon and n_max may be absent."""
    try:
        out = {
            "char_coeffs": tuple(_as_int(c) for c in d["char_coeffs"]),
            "initial_terms": tuple(_as_int(c) for c in d["initial_terms"]),
            "precision_bits": int(d.get("precision_bits", 256)),
        }
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed numfield input: {exc}") from exc
    if "epsilon" in d:
        out["epsilon"] = parse_rational(d["epsilon"])
    if "n_max" in d:
        out["n_max"] = int(d["n_max"])
    return out


def _as_int(v) -> int:
    q = parse_rational(v)
    if q.denominator != 1:
        raise ValueError(f"expected an integer, got {v!r}")
    return q.numerator
