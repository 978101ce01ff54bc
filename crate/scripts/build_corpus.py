"""Regenerate crates/core/data/knots.csv from the KnotInfo tables.

Requires the `database_knotinfo` package. Polynomials are stored in the
toolkit's own text form; reduced Khovanov homology is stored as JSON
triples [h, q, dim], with integral torsion as [h, q, order, count].
"""

import csv
import json
import re
import sys
from pathlib import Path

from database_knotinfo import link_list

def parse_kh(text):
    """Returns ({(h,q): dim}, {(h,q,order): count}) from a KnotInfo KH string."""
    free, tors = {}, {}
    if not text:
        return free, tors
    for raw in text.replace(" ", "").replace("^(-", "^(~").replace("-", "+-").split("+"):
        if not raw:
            continue
        raw = raw.replace("~", "-")
        coeff = 1
        if raw.startswith("-"):
            coeff, raw = -1, raw[1:]
        h = q = 0
        order = None
        for factor in raw.split("*"):
            m = re.fullmatch(r"([tqT])(?:\^\((-?\d+)\)|\^(-?\d+))?", factor)
            if m is None:
                coeff *= int(factor)
                continue
            e = int(m.group(2) or m.group(3) or 1)
            if m.group(1) == "t":
                h = e
            elif m.group(1) == "q":
                q = e
            else:
                order = e
        if order is None:
            free[(h, q)] = free.get((h, q), 0) + coeff
        else:
            tors[(h, q, order)] = tors.get((h, q, order), 0) + coeff
    return free, tors


def laurent(text):
    """Parses a KnotInfo polynomial in t into {exp: coeff}."""
    out = {}
    for raw in text.replace(" ", "").replace("^(-", "^(~").replace("-", "+-").split("+"):
        if not raw:
            continue
        raw = raw.replace("~", "-")
        m = re.fullmatch(r"(-?)(\d*)\*?(t(?:\^\(?(-?\d+)\)?)?)?", raw)
        if m is None:
            raise ValueError(f"bad term {raw!r} in {text!r}")
        c = int(m.group(2) or 1) * (-1 if m.group(1) else 1)
        e = 0 if m.group(3) is None else int(m.group(4) or 1)
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def fmt(poly):
    parts = []
    for e in sorted(poly, reverse=True):
        c = poly[e]
        mag = abs(c)
        mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
        body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


def symmetrize(poly):
    lo, hi = min(poly), max(poly)
    shift = (lo + hi) // 2
    out = {e - shift: c for e, c in poly.items()}
    if sum(out.values()) < 0:
        out = {e: -c for e, c in out.items()}
    return out


def pd_text(pd):
    crossings = json.loads(pd)
    return "PD[" + ",".join("X[" + ",".join(map(str, x)) + "]" for x in crossings) + "]"


def main(out_path):
    rows = []
    for k in link_list()[1:]:
        if not k["crossing_number"].isdigit() or int(k["crossing_number"]) > 9:
            continue
        name = k["name"]
        if name == "0_1":
            pd, kh_q, kh_f2, tors = "PD[]", {(0, 0): 1}, {(0, 0): 1}, {}
        else:
            pd = pd_text(k["pd_notation"])
            kh_q, _ = parse_kh(k["khovanov_reduced_rational_polynomial"])
            kh_f2, _ = parse_kh(k["khovanov_reduced_mod2_polynomial"])
            _, tors = parse_kh(k["khovanov_reduced_integral_polynomial"])
        rows.append({
            "name": name,
            "pd": pd,
            "alternating": k["alternating"] == "Y",
            "jones": fmt(laurent(k["jones_polynomial"])),
            "alexander": fmt(symmetrize(laurent(k["alexander_polynomial"]))),
            "det": abs(sum(c * (-1) ** e for e, c in laurent(k["alexander_polynomial"]).items())),
            "kh_q": json.dumps(sorted([h, q, d] for (h, q), d in kh_q.items()), separators=(",", ":")),
            "kh_f2": json.dumps(sorted([h, q, d] for (h, q), d in kh_f2.items()), separators=(",", ":")),
            "kh_torsion": json.dumps(sorted([h, q, o, c] for (h, q, o), c in tors.items()), separators=(",", ":")),
        })
    with open(out_path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            r["alternating"] = "Y" if r["alternating"] else "N"
            w.writerow(r)
    print(f"wrote {len(rows)} rows to {out_path}")


if __name__ == "__main__":
    main(Path(sys.argv[1] if len(sys.argv) > 1 else "crates/core/data/knots.csv"))
