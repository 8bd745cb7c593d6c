"""JSON interchange for polynomials and verdicts.

Schema (shared by every subcommand):

    {"n": int, "d": int, "kappa": [int, ...] (optional),
     "terms": [{"exponent": [int, ...], "coeff": float}, ...]}

A file without "kappa" whose exponents are all 0/1 parses as a
multiaffine polynomial; anything else parses as a capped polynomial, with
missing caps inferred from the largest exponent per variable. Terms are
serialized sorted by exponent so that parse -> serialize is byte-stable.
"""

from __future__ import annotations

import json

from .certify import Verdict
from .poly import HomPoly, MultiAffinePoly, subset_basis
from .strata import StratumReport


def poly_to_obj(f) -> dict:
    if isinstance(f, MultiAffinePoly):
        terms = []
        for subset, c in zip(f.basis.subsets, f.coeffs):
            if c != 0.0:
                exponent = [0] * f.n
                for i in subset:
                    exponent[i] = 1
                terms.append({"exponent": exponent, "coeff": float(c)})
        terms.sort(key=lambda t: t["exponent"])
        return {"n": f.n, "d": f.d, "terms": terms}
    if isinstance(f, HomPoly):
        terms = [
            {"exponent": list(alpha), "coeff": float(c)}
            for alpha, c in sorted(f.terms.items())
            if c != 0.0
        ]
        return {"n": f.n, "d": f.d, "kappa": list(f.kappa), "terms": terms}
    raise TypeError(f"unsupported polynomial type {type(f)!r}")


def obj_to_poly(obj: dict):
    try:
        n = int(obj["n"])
        d = int(obj["d"])
        raw_terms = obj["terms"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"polynomial object missing field: {exc}") from exc
    terms = {}
    for k, t in enumerate(raw_terms):
        try:
            alpha = tuple(int(a) for a in t["exponent"])
            coeff = float(t["coeff"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"bad term at index {k}: {exc}") from exc
        terms[alpha] = terms.get(alpha, 0.0) + coeff
    kappa = obj.get("kappa")
    if kappa is None and all(all(a in (0, 1) for a in alpha) for alpha in terms):
        basis = subset_basis(n, d)
        coeffs = [0.0] * basis.size
        for alpha, c in terms.items():
            subset = tuple(i for i, a in enumerate(alpha) if a)
            coeffs[basis.rank(subset)] += c
        return MultiAffinePoly(basis, coeffs)
    if kappa is None:
        kappa = [max(1, max((alpha[i] for alpha in terms), default=1)) for i in range(n)]
    return HomPoly(n, d, tuple(int(k) for k in kappa), terms)


def load_poly(path):
    with open(path, "r", encoding="utf-8") as fh:
        return obj_to_poly(json.load(fh))


def dumps(obj) -> str:
    """Deterministic JSON rendering used for every artifact this package
    writes; floats keep their shortest round-trip representation."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def save_poly(f, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(poly_to_obj(f)))


def verdict_to_obj(v: Verdict) -> dict:
    return {
        "status": v.status.value,
        "witness": v.witness,
        "tol": v.tol,
    }


def stratum_report_to_obj(report: StratumReport) -> dict:
    if report.kind == "matroid_bases":
        support = sorted(list(b) for b in report.support.bases)
    else:
        support = sorted(list(a) for a in report.support.points)
    witness = None
    if report.check.witness is not None:
        witness = [list(w) if isinstance(w, tuple) else w for w in report.check.witness]
    # on 0/1 exponent vectors the exponent exchange and basis exchange
    # notions coincide, so one flag serves both report kinds
    return {
        "kind": report.kind,
        "support": support,
        "m_convex": report.check.ok,
        "witness": witness,
        "tol": report.tol,
    }
