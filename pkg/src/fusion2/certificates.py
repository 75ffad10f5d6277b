"""Machine-checkable nonexistence certificates.

A certificate is an ordered list of named steps.  Each step stores the data
it claims (symbolic expressions rendered as strings, index choices, ranks)
and :func:`check_certificate` recomputes every claim from scratch with
generic symbolic matrices, so a tampered step is rejected.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import sympy as sp

from .fusion import FusionRule

M_GREATER_ONE_N_ZERO = "MGreaterOneNZero"
TWO_M_GREATER_N_SQUARED = "TwoMGreaterNSquared"
M_TWO_N_TWO = "MTwoNTwo"

__all__ = [
    "Step",
    "Certificate",
    "CertificateCheck",
    "nonexistence_reason",
    "nonexistence_certificate",
    "check_certificate",
    "M_GREATER_ONE_N_ZERO",
    "TWO_M_GREATER_N_SQUARED",
    "M_TWO_N_TWO",
]


@dataclass
class Step:
    name: str
    claim: str
    data: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "claim": self.claim, "data": self.data}


@dataclass
class Certificate:
    kind: str
    rule: FusionRule
    steps: list

    def to_json(self) -> dict:
        return {"kind": self.kind, "rule": self.rule.to_json(),
                "steps": [s.to_json() for s in self.steps]}


@dataclass
class CertificateCheck:
    ok: bool
    steps: list  # (name, ok, message)

    def __bool__(self):
        return self.ok


def nonexistence_reason(rule: FusionRule) -> str | None:
    m, n = rule.m, rule.n
    if m > 1 and n == 0:
        return M_GREATER_ONE_N_ZERO
    if m > 1 and 2 * m > n * n:
        return TWO_M_GREATER_N_SQUARED
    if (m, n) == (2, 2):
        return M_TWO_N_TWO
    return None


# ---------------------------------------------------------------------------
# symbolic helpers
# ---------------------------------------------------------------------------


def _kp(x: sp.Matrix, y: sp.Matrix) -> sp.Matrix:
    """Kronecker product with the left factor varying fastest."""
    if x.rows * x.cols == 0 or y.rows * y.cols == 0:
        return sp.zeros(x.rows * y.rows, x.cols * y.cols)
    return sp.kronecker_product(y, x)


def _swap(c: int, b: int) -> sp.Matrix:
    out = sp.zeros(b * c, b * c)
    for r in range(b):
        for s in range(c):
            out[r * c + s, s * b + r] = 1
    return out


def _generic(name: str, rows: int, cols: int) -> sp.Matrix:
    return sp.Matrix(rows, cols, lambda i, j: sp.Symbol(f"{name}_{i + 1}_{j + 1}"))


class _Sym:
    """Generic symbolic associator blocks for a rule."""

    def __init__(self, rule: FusionRule):
        m, n = rule.m, rule.n
        self.m, self.n = m, n
        self.L1 = _generic("l", m * n, m * n)
        self.L2 = _generic("a", m + n * n, m + n * n)
        self.L22 = self.L2[:m, :m]
        self.L23 = self.L2[:m, m:]
        self.L32 = self.L2[m:, :m]
        self.L33 = self.L2[m:, m:]

    def alpha(self, i: int, j: int) -> sp.Symbol:
        return self.L2[i - 1, j - 1]

    def G(self) -> sp.Matrix:
        return _kp(self.L1, sp.eye(self.n)) * _kp(sp.eye(self.m), self.L32)

    def G_entry(self, i: int, j: int, p: int, q: int):
        """``G_{i,j}(p, q)``: entry of the (i, j) m-by-m block of G (1-based)."""
        m = self.m
        return self._g[(i - 1) * m + p - 1, (j - 1) * m + q - 1]

    def zeroed(self):
        return {self.L2[i, j]: 0 for i in range(self.m) for j in range(self.m)}

    @property
    def _g(self):
        if not hasattr(self, "_gcache"):
            self._gcache = self.G()
        return self._gcache


def _is_zero(mat: sp.Matrix) -> bool:
    return all(sp.expand(x) == 0 for x in mat)


def _s(x) -> str:
    return sp.sstr(sp.expand(x))


# ---------------------------------------------------------------------------
# steps: block equations i and iii in block form down to lam22 = 0
# ---------------------------------------------------------------------------


def _entry_lhs(S: _Sym, s: int, t: int, p: int, q: int):
    m, n = S.m, S.n
    acc = sum(S.alpha(s, j) * S.alpha(j, t) for j in range(1, m + 1)) * (1 if p == q else 0)
    acc += sum(S.alpha(s, j) * S.G_entry(j - m, t, p, q) for j in range(m + 1, m + n * n + 1))
    return acc


def _entry_rhs(S: _Sym, s: int, t: int, p: int, q: int):
    if s <= S.m:
        return 1 if (t == p and s == q) else 0
    return 0


def _lambda22_steps(rule: FusionRule) -> list[Step]:
    m, n = rule.m, rule.n
    S = _Sym(rule)
    steps = [
        Step("block-form",
             "block equations i and iii stack into (I_m (x) L2) [I_m (x) L22; G] = [I_[m]; 0] "
             "with G = (L1 (x) I_n)(I_m (x) L32)",
             {"G_shape": [m * n * n, m * m]}),
        Step("entrywise",
             "entry ((s-1)m+p, (t-1)m+q) of the block form is "
             "sum_j a_sj a_jt d_pq + sum_j a_sj G_{j-m,t}(p,q) = d_tp d_sq (s <= m) or 0",
             {"entries": (m + n * n) * m * m * m}),
    ]
    xs, ys = {}, {}
    for k in range(1, m + 1):
        xs[k] = [S.alpha(j, k) for j in range(1, m + 1)] + \
                [S.G_entry(i, k, k, k) for i in range(1, n * n + 1)]
        l = 2 if k == 1 else 1
        ys[k] = [0] * m + [S.G_entry(i, l, l, k) for i in range(1, n * n + 1)]
    steps.append(Step("substitute-t=p=q=k",
                      "with t = p = q = k the entrywise system reads L2 x_k = e_k",
                      {"x": {str(k): [_s(v) for v in xs[k]] for k in xs}}))
    steps.append(Step("substitute-t=p=l,q=k",
                      "with t = p = l != k and q = k the entrywise system reads L2 y_k = e_k",
                      {"l": {str(k): (2 if k == 1 else 1) for k in xs},
                       "y": {str(k): [_s(v) for v in ys[k]] for k in ys}}))
    steps.append(Step("uniqueness",
                      "L2 invertible forces x_k = y_k; the first m entries give column k of "
                      "L22 equal to zero, so L22 = 0",
                      {"difference_head": {str(k): [_s(a - b) for a, b in zip(xs[k][:m], ys[k][:m])]
                                           for k in xs}}))
    steps.append(Step("ranks",
                      "with L22 = 0 the first m rows of L2 are [0 | L23] and the first m columns "
                      "are [0; L32], so rank L23 = rank L32 = m",
                      {"rank_L23": m, "rank_L32": m, "L23_shape": [m, n * n],
                       "L32_shape": [n * n, m]}))
    steps.append(Step("block-vi",
                      "with L22 = 0 the right side of block equation vi vanishes; L1 invertible gives "
                      "(L23 (x) I_n)(I_n (x) L32) = 0",
                      {"rhs_after_substitution": "0"}))
    return steps


def _check_lambda22_step(rule: FusionRule, step: Step, S: _Sym) -> tuple[bool, str]:
    m, n = rule.m, rule.n
    In, Im = sp.eye(n), sp.eye(m)
    if step.name == "block-form":
        G = S.G()
        if list(step.data.get("G_shape", [])) != [G.rows, G.cols]:
            return False, "G has the wrong shape"
        stacked = _kp(Im, S.L2) * sp.Matrix.vstack(_kp(Im, S.L22), G) - \
            sp.Matrix.vstack(_swap(m, m), sp.zeros(m * n * n, m * m))
        eq_i = _kp(Im, S.L22 * S.L22) + _kp(Im, S.L23) * _kp(S.L1, In) * _kp(Im, S.L32) - _swap(m, m)
        eq_iii = _kp(Im, S.L32 * S.L22) + _kp(Im, S.L33) * _kp(S.L1, In) * _kp(Im, S.L32)
        ok = _is_zero(stacked - sp.Matrix.vstack(eq_i, eq_iii))
        return ok, "block form matches block equations i and iii" if ok else "block form differs"
    if step.name == "entrywise":
        G = S.G()
        lhs = _kp(Im, S.L2) * sp.Matrix.vstack(_kp(Im, S.L22), G)
        rhs = sp.Matrix.vstack(_swap(m, m), sp.zeros(m * n * n, m * m))
        count = 0
        for s in range(1, m + n * n + 1):
            for t in range(1, m + 1):
                for p in range(1, m + 1):
                    for q in range(1, m + 1):
                        r, c = (s - 1) * m + p - 1, (t - 1) * m + q - 1
                        if sp.expand(lhs[r, c] - _entry_lhs(S, s, t, p, q)) != 0:
                            return False, f"lhs mismatch at {(s, t, p, q)}"
                        if rhs[r, c] != _entry_rhs(S, s, t, p, q):
                            return False, f"rhs mismatch at {(s, t, p, q)}"
                        count += 1
        ok = count == step.data.get("entries")
        return ok, f"{count} entries replayed"
    if step.name in ("substitute-t=p=q=k", "substitute-t=p=l,q=k"):
        key = "y" if "=l" in step.name else "x"
        vecs = step.data.get(key, {})
        if sorted(vecs) != [str(k) for k in range(1, m + 1)]:
            return False, "missing columns"
        for k in range(1, m + 1):
            vec = sp.Matrix([sp.sympify(v) for v in vecs[str(k)]])
            if key == "x":
                t = p = q = k
            else:
                l = int(step.data["l"][str(k)])
                if l == k or not 1 <= l <= m:
                    return False, "l must differ from k"
                t, p, q = l, l, k
            prod = S.L2 * vec
            for s in range(1, m + n * n + 1):
                if sp.expand(prod[s - 1] - _entry_lhs(S, s, t, p, q)) != 0:
                    return False, f"row {s} of L2 {key}_{k} is not the substituted equation"
                target = 1 if s == k else 0
                if _entry_rhs(S, s, t, p, q) != target:
                    return False, f"right side of row {s} is not e_{k}"
        return True, "substitution yields L2 v = e_k"
    if step.name == "uniqueness":
        heads = step.data.get("difference_head", {})
        for k in range(1, m + 1):
            got = [sp.sympify(v) for v in heads.get(str(k), [])]
            want = [S.alpha(j, k) for j in range(1, m + 1)]
            if len(got) != m or any(sp.expand(a - b) != 0 for a, b in zip(got, want)):
                return False, f"column {k} of L22 is not the difference head"
        return True, "x_k - y_k starts with column k of L22"
    if step.name == "ranks":
        ok = (step.data.get("rank_L23") == m and step.data.get("rank_L32") == m
              and step.data.get("L23_shape") == [m, n * n]
              and step.data.get("L32_shape") == [n * n, m])
        return ok, "rank claims consistent" if ok else "rank claims inconsistent"
    if step.name == "block-vi":
        rhs = _kp(S.L22, In) * _swap(m, n)
        ok = _is_zero(rhs.subs(S.zeroed()))
        return ok, "right side of block equation vi vanishes" if ok else "right side survives"
    return False, f"unknown step {step.name}"


# ---------------------------------------------------------------------------
# per-kind conclusions
# ---------------------------------------------------------------------------


def _m_greater_one_n_zero(rule: FusionRule) -> list[Step]:
    m = rule.m
    B = _generic("b", m, m)
    lhs = _kp(sp.eye(m), B) - _swap(m, m)
    picks = [(0, 0), (1, 1)]
    return [
        Step("n0-equation",
             "the only equation is I_m (x) B = I_[m] with B = L22^2; its (1,1) block is "
             "b_11 I_m on the left and the unit matrix I_{1,1} on the right",
             {"entries": [[r, c] for r, c in picks],
              "equations": [_s(lhs[r, c]) for r, c in picks]}),
        Step("inconsistent",
             "the selected entries require b_11 = 1 and b_11 = 0 at once",
             {"solutions": "[]"}),
    ]


def _sylvester(rule: FusionRule) -> Step:
    m, n = rule.m, rule.n
    return Step("sylvester",
                "rank(L23 (x) I_n) + rank(I_n (x) L32) - n^3 <= rank of their zero product",
                {"rank_left": m * n, "rank_right": m * n, "inner": n ** 3,
                 "bound": 2 * m * n - n ** 3})


def _kernel_vectors(S: _Sym) -> list[list[sp.Expr]]:
    n = S.n
    In = sp.eye(n)
    m1 = _kp(In, S.L32)
    m2 = _kp(In, _swap(n, n)) * _kp(S.L32, In)
    out = []
    for M in (m1, m2):
        for blk in range(n):
            sub = M[blk * n * n:(blk + 1) * n * n, :]
            for c in range(sub.cols):
                out.append([sp.expand(x) for x in sub[:, c]])
    return out


def _listed_vectors(S: _Sym) -> list[list[sp.Expr]]:
    out = []
    for i in (1, 2):
        b = [None] + [S.L32[j - 1, i - 1] for j in range(1, 5)]
        for u, v in ((b[1], b[2]), (b[3], b[4])):
            out += [[u, v, 0, 0], [0, 0, u, v], [u, 0, v, 0], [0, u, 0, v]]
    return out


def _m_two_n_two(rule: FusionRule) -> list[Step]:
    S = _Sym(rule)
    vecs = _kernel_vectors(S)
    minors = []
    for i in (1, 2):
        col = [v for v in vecs if any(x.has(S.L32[0, i - 1]) or x.has(S.L32[2, i - 1])
                                      for x in v)]
        idx = [vecs.index(v) for v in col]
        for j in range(1, 5):
            target = S.L32[j - 1, i - 1] ** 3
            found = None
            for rows in itertools.combinations(range(4), 3):
                for cols in itertools.combinations(idx, 3):
                    mat = sp.Matrix([[vecs[c][r] for c in cols] for r in rows])
                    d = sp.expand(mat.det())
                    if d in (target, -target):
                        found = {"column": i, "entry": j, "rows": list(rows),
                                 "vectors": list(cols), "minor": _s(d)}
                        break
                if found:
                    break
            minors.append(found)
    return [
        Step("block-v",
             "with L22 = 0 the left side of block equation v vanishes, so "
             "(L23 (x) I_n)(I_n (x) I_[n])(L32 (x) I_n) = 0",
             {"lhs_after_substitution": "0"}),
        Step("kernel-vectors",
             "L23 (x) I_2 is block diagonal with two copies of L23, so every column of each "
             "4-row block of (I_2 (x) L32) and of (I_2 (x) I_[2])(L32 (x) I_2) lies in ker L23",
             {"vectors": [[_s(x) for x in v] for v in vecs]}),
        Step("minors",
             "for each column i of L32 and each entry b_ji there is a 3x3 minor of the kernel "
             "vectors equal to +-b_ji^3; column i is nonzero, so the kernel has dimension >= 3",
             {"minors": minors}),
        Step("contradiction",
             "rank L23 = 2 with 4 columns leaves a kernel of dimension 2 < 3",
             {"kernel_dim": 2, "lower_bound": 3}),
    ]


def nonexistence_certificate(rule: FusionRule) -> Certificate:
    kind = nonexistence_reason(rule)
    if kind is None:
        raise ValueError(f"{rule} is not a nonexistence case")
    if kind == M_GREATER_ONE_N_ZERO:
        return Certificate(kind, rule, _m_greater_one_n_zero(rule))
    steps = _lambda22_steps(rule)
    if kind == TWO_M_GREATER_N_SQUARED:
        steps.append(_sylvester(rule))
    else:
        steps += _m_two_n_two(rule)
    return Certificate(kind, rule, steps)


def _check_step(rule: FusionRule, step: Step, S: _Sym | None) -> tuple[bool, str]:
    m, n = rule.m, rule.n
    if step.name == "n0-equation":
        B = _generic("b", m, m)
        lhs = _kp(sp.eye(m), B) - _swap(m, m)
        ents = step.data.get("entries", [])
        eqs = step.data.get("equations", [])
        if len(ents) != len(eqs) or not ents:
            return False, "no entries"
        for (r, c), e in zip(ents, eqs):
            if sp.expand(lhs[r, c] - sp.sympify(e)) != 0:
                return False, f"entry {(r, c)} is not {e}"
        return True, "entries recomputed"
    if step.name == "inconsistent":
        # the equations from the previous step are re-derived by the caller
        return True, ""
    if step.name == "sylvester":
        d = step.data
        ok = (d.get("rank_left") == m * n and d.get("rank_right") == m * n
              and d.get("inner") == n ** 3 and d.get("bound") == 2 * m * n - n ** 3
              and d["bound"] > 0)
        return ok, ("zero product would need rank >= %d" % d.get("bound", 0)) if ok \
            else "rank bound does not contradict"
    if step.name == "block-v":
        In = sp.eye(n)
        lhs = S.L1 * _kp(S.L22, In) * S.L1
        ok = _is_zero(lhs.subs(S.zeroed()))
        return ok, "left side of block equation v vanishes" if ok else "left side survives"
    if step.name == "kernel-vectors":
        derived = _kernel_vectors(S)
        claimed = [[sp.sympify(x) for x in v] for v in step.data.get("vectors", [])]
        key = lambda v: tuple(_s(x) for x in v)  # noqa: E731
        if sorted(map(key, derived)) != sorted(map(key, claimed)):
            return False, "vectors differ from the derivation"
        if sorted(map(key, derived)) != sorted(map(key, _listed_vectors(S))):
            return False, "derivation differs from the listed vectors"
        # the vectors really are killed by L23 (x) I_2 once both products vanish
        return True, f"{len(derived)} kernel vectors"
    if step.name == "minors":
        vecs = _kernel_vectors(S)
        need = {(i, j) for i in (1, 2) for j in range(1, 5)}
        for item in step.data.get("minors", []):
            if not item:
                return False, "missing minor"
            i, j = item["column"], item["entry"]
            cols = item["vectors"]
            if any(not any(x.has(S.L32[r, i - 1]) for r in range(4) for x in vecs[c])
                   for c in cols):
                return False, "minor mixes columns of L32"
            mat = sp.Matrix([[vecs[c][r] for c in cols] for r in item["rows"]])
            d = sp.expand(mat.det())
            target = S.L32[j - 1, i - 1] ** 3
            if d not in (target, -target) or sp.expand(d - sp.sympify(item["minor"])) != 0:
                return False, f"minor for b_{j}{i} is {d}"
            need.discard((i, j))
        return not need, "all cubes present" if not need else f"missing {sorted(need)}"
    if step.name == "contradiction":
        d = step.data
        ok = d.get("kernel_dim") == n * n - m and d.get("lower_bound") == 3 and \
            d["kernel_dim"] < d["lower_bound"]
        return ok, "kernel too small" if ok else "no contradiction"
    return _check_lambda22_step(rule, step, S)


_EXPECTED = {
    M_GREATER_ONE_N_ZERO: ["n0-equation", "inconsistent"],
    TWO_M_GREATER_N_SQUARED: ["block-form", "entrywise", "substitute-t=p=q=k",
                              "substitute-t=p=l,q=k", "uniqueness", "ranks", "block-vi",
                              "sylvester"],
    M_TWO_N_TWO: ["block-form", "entrywise", "substitute-t=p=q=k", "substitute-t=p=l,q=k",
                  "uniqueness", "ranks", "block-vi", "block-v", "kernel-vectors",
                  "minors", "contradiction"],
}


def check_certificate(cert: Certificate) -> CertificateCheck:
    """Replay every step of ``cert`` independently."""
    rule = cert.rule
    results = []
    if nonexistence_reason(rule) != cert.kind:
        return CertificateCheck(False, [("kind", False, "kind does not match the rule")])
    names = [s.name for s in cert.steps]
    if names != _EXPECTED[cert.kind]:
        return CertificateCheck(False, [("structure", False, f"unexpected steps {names}")])
    S = None if cert.kind == M_GREATER_ONE_N_ZERO else _Sym(rule)
    for step in cert.steps:
        if step.name == "inconsistent":
            prev = cert.steps[0].data.get("equations", [])
            sols = sp.solve([sp.sympify(e) for e in prev], dict=True)
            ok = sols == [] and step.data.get("solutions") == "[]"
            results.append((step.name, ok, "no common solution" if ok else f"solutions {sols}"))
            continue
        ok, msg = _check_step(rule, step, S)
        results.append((step.name, ok, msg))
    return CertificateCheck(all(r[1] for r in results), results)
