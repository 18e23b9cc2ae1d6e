#!/usr/bin/env python3
"""Independent MILP check: solve an exported .lp file with scipy's HiGHS.

Usage: external_solve.py model.lp out.sol

Parses the exporter's LP dialect (Minimize / Subject To / Bounds / Binary /
End), solves, and writes a solution dump: a `# objective N` header plus one
`name value` line per nonzero variable, the format parse_solution_file reads.

Exit codes: 0 solved, 1 usage or parse failure, 2 model infeasible,
42 scipy not installed (callers treat that as "skip").
"""

import sys

try:
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp
except ImportError:
    sys.exit(42)


class Model:
    def __init__(self):
        self.names = []
        self.ids = {}
        self.objective = []   # (coef, var id)
        self.rows = []        # (terms, relation, rhs)
        self.upper = {}       # var id -> finite upper bound
        self.binary = set()   # var ids

    def vid(self, name):
        if name not in self.ids:
            self.ids[name] = len(self.names)
            self.names.append(name)
        return self.ids[name]


def parse_terms(model, expr):
    """`- phiL[a] + 400 Z[b] - rho[c]` -> [(-1, i), (400, j), (-1, k)]."""
    terms = []
    sign = 1.0
    pending = None
    for tok in expr.split():
        if tok == "+":
            sign = 1.0
        elif tok == "-":
            sign = -1.0
        else:
            try:
                pending = float(tok)
                continue
            except ValueError:
                coef = pending if pending is not None else 1.0
                terms.append((sign * coef, model.vid(tok)))
                sign, pending = 1.0, None
    return terms


def parse_lp(text):
    model = Model()
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line in ("Minimize", "Subject To", "Bounds", "Binary", "End"):
            section = line
            continue
        if section == "Minimize":
            model.objective = parse_terms(model, line.split(":", 1)[1])
        elif section == "Subject To":
            body = line.split(":", 1)[1]
            for rel in (" <= ", " >= ", " = "):
                if rel in body:
                    lhs, rhs = body.rsplit(rel, 1)
                    model.rows.append((parse_terms(model, lhs), rel.strip(), float(rhs)))
                    break
            else:
                raise ValueError("constraint without a relation: " + line)
        elif section == "Bounds":
            name, rel, value = line.split()
            if rel != "<=":
                raise ValueError("unsupported bound form: " + line)
            model.upper[model.vid(name)] = float(value)
        elif section == "Binary":
            model.binary.add(model.vid(line))
        else:
            raise ValueError("line outside any section: " + line)
    return model


def solve(model):
    n = len(model.names)
    c = np.zeros(n)
    for coef, i in model.objective:
        c[i] += coef

    a = np.zeros((len(model.rows), n))
    lo = np.full(len(model.rows), -np.inf)
    hi = np.full(len(model.rows), np.inf)
    for r, (terms, rel, rhs) in enumerate(model.rows):
        for coef, i in terms:
            a[r, i] += coef
        if rel in ("<=", "="):
            hi[r] = rhs
        if rel in (">=", "="):
            lo[r] = rhs

    ub = np.full(n, np.inf)
    for i in sorted(model.binary):
        ub[i] = 1.0
    for i, value in model.upper.items():
        ub[i] = value
    integrality = np.zeros(n)
    for i in model.binary:
        integrality[i] = 1

    return milp(c=c, constraints=LinearConstraint(a, lo, hi),
                bounds=Bounds(np.zeros(n), ub), integrality=integrality)


def main():
    if len(sys.argv) != 3:
        print(__doc__.strip(), file=sys.stderr)
        return 1
    with open(sys.argv[1]) as f:
        model = parse_lp(f.read())
    res = solve(model)
    if res.status == 2:
        print("model is infeasible", file=sys.stderr)
        return 2
    if res.status != 0:
        print(f"solver status {res.status}: {res.message}", file=sys.stderr)
        return 1

    lines = [f"# objective {round(res.fun)}"]
    for i, name in enumerate(model.names):
        value = res.x[i]
        if i in model.binary:
            value = round(value)
        if abs(value) < 1e-9:
            continue
        lines.append(f"{name} {value:.12g}")
    with open(sys.argv[2], "w") as f:
        f.write("\n".join(lines) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
