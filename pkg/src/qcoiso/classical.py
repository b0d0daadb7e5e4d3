"""Classical semisimple Lie algebras: realizations, the r-matrix, coisotropy.

Every algebra is presented through a fixed basis (root vectors e_alpha,
f_alpha for each positive root, plus the simple coroots h_i) with exact
rational structure constants.  Types A-D use the standard matrix realizations
(traceless, symplectic, orthogonal); G2 and E6 are built abstractly from the
Cartan matrix by iterated brackets of simple root vectors.

Elements are sparse coefficient dicts over the basis.  Bivectors (antisymmetric
two-tensors) are dicts keyed by index pairs (i, j) with i < j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .rootsys import Root, RootSystem

F0 = Fraction(0)
F1 = Fraction(1)


class RealizationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Small exact linear algebra over Fraction with arbitrary hashable keys.
# ---------------------------------------------------------------------------

class FractionSpan:
    """Incremental row echelon over Fraction-coefficient sparse vectors."""

    def __init__(self):
        self.rows = {}  # pivot key -> normalized vector

    def reduce(self, vec):
        vec = dict(vec)
        while vec:
            pivot = min(vec, key=_key_order)
            row = self.rows.get(pivot)
            if row is None:
                return vec, pivot
            c = vec[pivot]
            for k, v in row.items():
                w = vec.get(k, F0) - c * v
                if w:
                    vec[k] = w
                else:
                    vec.pop(k, None)
        return vec, None

    def add(self, vec) -> bool:
        vec, pivot = self.reduce(vec)
        if pivot is None:
            return False
        inv = F1 / vec[pivot]
        self.rows[pivot] = {k: v * inv for k, v in vec.items()}
        return True

    def contains(self, vec) -> bool:
        _, pivot = self.reduce(vec)
        return pivot is None

    def echelon_basis(self):
        """Fully reduced, deterministically ordered basis of the span."""
        pivots = sorted(self.rows, key=_key_order)
        reduced = {}
        for p in reversed(pivots):
            vec = dict(self.rows[p])
            for k in list(vec):
                if k != p and k in reduced:
                    c = vec.pop(k)
                    for kk, vv in reduced[k].items():
                        w = vec.get(kk, F0) - c * vv
                        if w:
                            vec[kk] = w
                        else:
                            vec.pop(kk, None)
            reduced[p] = vec
        return [reduced[p] for p in pivots]

    def rank(self):
        return len(self.rows)


def _key_order(k):
    return (len(k), k) if isinstance(k, tuple) else (0, k)


def vadd(acc, vec, scale=F1):
    for k, v in vec.items():
        w = acc.get(k, F0) + scale * v
        if w:
            acc[k] = w
        else:
            acc.pop(k, None)
    return acc


# ---------------------------------------------------------------------------
# Chevalley bases.
# ---------------------------------------------------------------------------

@dataclass
class ChevalleyBasis:
    """Fixed basis with bracket table and Killing form for one root system.

    Basis layout: indices 0..m-1 are e_alpha over the positive roots in the
    root system's deterministic order, m..2m-1 the matching f_alpha, and
    2m..2m+rank-1 the simple coroots h_i.
    """

    rs: RootSystem
    labels: list
    matrices: list | None  # sparse matrices for the classical types
    _bracket_table: dict = field(default_factory=dict)
    _killing_cache: dict = field(default_factory=dict)
    _trace_scale: Fraction | None = None

    # -- indexing ------------------------------------------------------------

    @property
    def npos(self):
        return len(self.rs.positive_roots)

    @property
    def dim(self):
        return 2 * self.npos + self.rs.rank

    def e_index(self, root: Root) -> int:
        return self._pos_index[root.decomp]

    def f_index(self, root: Root) -> int:
        return self.npos + self._pos_index[root.decomp]

    def h_index(self, i: int) -> int:
        return 2 * self.npos + i

    def e(self, root: Root) -> dict:
        return {self.e_index(root): F1}

    def f(self, root: Root) -> dict:
        return {self.f_index(root): F1}

    def h(self, i: int) -> dict:
        return {self.h_index(i): F1}

    def index_weight(self, idx: int):
        """Root attached to a basis index (None for Cartan indices)."""
        m = self.npos
        if idx < m:
            return self.rs.positive_roots[idx].decomp
        if idx < 2 * m:
            return tuple(-c for c in self.rs.positive_roots[idx - m].decomp)
        return None

    # -- brackets -------------------------------------------------------------

    def bracket_basis(self, i: int, j: int) -> dict:
        if i == j:
            return {}
        if i > j:
            return {k: -v for k, v in self.bracket_basis(j, i).items()}
        hit = self._bracket_table.get((i, j))
        if hit is None:
            raise RealizationError("bracket table incomplete")
        return hit

    def bracket(self, x: dict, y: dict) -> dict:
        out = {}
        for i, xi in x.items():
            for j, yj in y.items():
                vadd(out, self.bracket_basis(i, j), xi * yj)
        return out

    # -- Killing form ----------------------------------------------------------

    def killing(self, x: dict, y: dict) -> Fraction:
        if self.matrices is not None:
            if self._trace_scale is None:
                self._trace_scale = self._calibrate_trace()
            return self._trace_scale * self._trace_form(x, y)
        return self._ad_trace(x, y)

    def _trace_form(self, x: dict, y: dict) -> Fraction:
        acc = F0
        for i, xi in x.items():
            for j, yj in y.items():
                key = (min(i, j), max(i, j))
                t = self._trace_cache.get(key)
                if t is None:
                    t = _mat_trace_product(self.matrices[i], self.matrices[j])
                    self._trace_cache[key] = t
                acc += xi * yj * t
        return acc

    def _calibrate_trace(self) -> Fraction:
        self._trace_cache = {}
        x, y = {0: F1}, {self.npos: F1}
        ad = self._ad_trace(x, y)
        tr = self._trace_form(x, y)
        if tr == 0:
            raise RealizationError("degenerate pairing while calibrating")
        return ad / tr

    def _ad_trace(self, x: dict, y: dict) -> Fraction:
        acc = F0
        for b in range(self.dim):
            v = self.bracket(y, {b: F1})
            if not v:
                continue
            w = self.bracket(x, v)
            acc += w.get(b, F0)
        return acc

    # -- rendering --------------------------------------------------------------

    def render_element(self, x: dict) -> str:
        if not x:
            return "0"
        parts = []
        for i in sorted(x):
            c = x[i]
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            parts.append(("-" if c < 0 else "+", f"{mag}{self.labels[i]}"))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, term in parts[1:]:
            s += sign + term
        return s


def _mat_trace_product(a: dict, b: dict) -> Fraction:
    acc = F0
    for (r, c), v in a.items():
        w = b.get((c, r))
        if w is not None:
            acc += v * w
    return acc


# ---------------------------------------------------------------------------
# Matrix realizations for the classical series.
# ---------------------------------------------------------------------------

def _eu(i, j):
    return {(i, j): F1}


def _madd(*mats_scales):
    out = {}
    for mat, s in mats_scales:
        for k, v in mat.items():
            w = out.get(k, F0) + s * v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
    return out


def _mat_mul(a, b):
    out = {}
    bt = {}
    for (r, c), v in b.items():
        bt.setdefault(r, []).append((c, v))
    for (r, c), v in a.items():
        for c2, w in bt.get(c, ()):
            key = (r, c2)
            x = out.get(key, F0) + v * w
            if x:
                out[key] = x
            else:
                out.pop(key, None)
    return out


def _mat_bracket(a, b):
    return _madd((_mat_mul(a, b), F1), (_mat_mul(b, a), -F1))


def _classical_matrices(rs: RootSystem):
    """(e_mat, f_mat) per positive root plus coroot matrices, per type."""
    series, n = rs.type.series, rs.rank
    e_of, f_of = {}, {}

    def x_ij(i, j, n):
        return _madd((_eu(i, j), F1), (_eu(n + j, n + i), -F1))

    if series == "A":
        for r in rs.positive_roots:
            coords = rs.euclid_coords(r)
            i = next(k for k, c in enumerate(coords) if c == 1)
            j = next(k for k, c in enumerate(coords) if c == -1)
            e_of[r.decomp] = _eu(i, j)
            f_of[r.decomp] = _eu(j, i)
        coroots = [
            _madd((_eu(i, i), F1), (_eu(i + 1, i + 1), -F1)) for i in range(n)
        ]
        return e_of, f_of, coroots

    if series in "CD":
        for r in rs.positive_roots:
            coords = rs.euclid_coords(r)
            pos = [k for k, c in enumerate(coords) if c > 0]
            neg = [k for k, c in enumerate(coords) if c < 0]
            if len(pos) == 1 and len(neg) == 1:  # L_i - L_j
                i, j = pos[0], neg[0]
                e_of[r.decomp] = x_ij(i, j, n)
                f_of[r.decomp] = x_ij(j, i, n)
            elif len(pos) == 2:  # L_i + L_j, i < j
                i, j = pos
                if series == "C":
                    e_of[r.decomp] = _madd((_eu(i, n + j), F1), (_eu(j, n + i), F1))
                    f_of[r.decomp] = _madd((_eu(n + i, j), F1), (_eu(n + j, i), F1))
                else:
                    e_of[r.decomp] = _madd((_eu(i, n + j), F1), (_eu(j, n + i), -F1))
                    f_of[r.decomp] = _madd((_eu(n + j, i), F1), (_eu(n + i, j), -F1))
            else:  # 2L_i, type C only
                i = pos[0]
                e_of[r.decomp] = _eu(i, n + i)
                f_of[r.decomp] = _eu(n + i, i)
        coroots = []
        for i in range(n - 1):
            coroots.append(
                _madd(
                    (_eu(i, i), F1),
                    (_eu(i + 1, i + 1), -F1),
                    (_eu(n + i, n + i), -F1),
                    (_eu(n + i + 1, n + i + 1), F1),
                )
            )
        if series == "C":
            coroots.append(_madd((_eu(n - 1, n - 1), F1), (_eu(2 * n - 1, 2 * n - 1), -F1)))
        else:
            coroots.append(
                _madd(
                    (_eu(n - 2, n - 2), F1),
                    (_eu(n - 1, n - 1), F1),
                    (_eu(2 * n - 2, 2 * n - 2), -F1),
                    (_eu(2 * n - 1, 2 * n - 1), -F1),
                )
            )
        return e_of, f_of, coroots

    if series == "B":
        for r in rs.positive_roots:
            coords = rs.euclid_coords(r)
            pos = [k for k, c in enumerate(coords) if c > 0]
            neg = [k for k, c in enumerate(coords) if c < 0]
            if len(pos) == 1 and len(neg) == 1:
                i, j = pos[0], neg[0]
                e_of[r.decomp] = x_ij(i, j, n)
                f_of[r.decomp] = x_ij(j, i, n)
            elif len(pos) == 2:
                i, j = pos
                e_of[r.decomp] = _madd((_eu(i, n + j), F1), (_eu(j, n + i), -F1))
                f_of[r.decomp] = _madd((_eu(n + j, i), F1), (_eu(n + i, j), -F1))
            else:  # short root L_i
                i = pos[0]
                e_of[r.decomp] = _madd((_eu(i, 2 * n), F1), (_eu(2 * n, n + i), -F1))
                f_of[r.decomp] = _madd((_eu(2 * n, i), F1), (_eu(n + i, 2 * n), -F1))
        coroots = []
        for i in range(n - 1):
            coroots.append(
                _madd(
                    (_eu(i, i), F1),
                    (_eu(i + 1, i + 1), -F1),
                    (_eu(n + i, n + i), -F1),
                    (_eu(n + i + 1, n + i + 1), F1),
                )
            )
        coroots.append(
            _madd((_eu(n - 1, n - 1), Fraction(2)), (_eu(2 * n - 1, 2 * n - 1), -Fraction(2)))
        )
        return e_of, f_of, coroots

    raise RealizationError(f"no matrix realization for {rs.type}")


def _build_matrix_basis(rs: RootSystem) -> ChevalleyBasis:
    e_of, f_of, coroots = _classical_matrices(rs)
    mats, labels = [], []
    for r in rs.positive_roots:
        mats.append(e_of[r.decomp])
        labels.append(f"e[{rs.render_root(r)}]")
    for r in rs.positive_roots:
        mats.append(f_of[r.decomp])
        labels.append(f"f[{rs.render_root(r)}]")
    for i, m in enumerate(coroots):
        mats.append(m)
        labels.append(f"h{i + 1}")
    cb = ChevalleyBasis(rs=rs, labels=labels, matrices=mats)
    cb._pos_index = {r.decomp: i for i, r in enumerate(rs.positive_roots)}
    cb._trace_cache = {}
    solver = _MatrixCoordinatizer(mats)
    dim = cb.dim
    for i in range(dim):
        for j in range(i + 1, dim):
            br = _mat_bracket(mats[i], mats[j])
            cb._bracket_table[(i, j)] = solver.express(br)
    return cb


class _MatrixCoordinatizer:
    """Expresses matrices over a fixed independent list of sparse matrices."""

    def __init__(self, mats):
        self.rows = {}  # pivot cell -> (normalized matrix, basis combination)
        for idx, m in enumerate(mats):
            vec, tag = dict(m), {idx: F1}
            while vec:
                pivot = min(vec, key=_key_order)
                hit = self.rows.get(pivot)
                if hit is None:
                    inv = F1 / vec[pivot]
                    self.rows[pivot] = (
                        {k: v * inv for k, v in vec.items()},
                        {k: v * inv for k, v in tag.items()},
                    )
                    break
                c = vec[pivot]
                vadd(vec, hit[0], -c)
                vadd(tag, hit[1], -c)
            else:
                raise RealizationError("dependent matrix basis")

    def express(self, mat) -> dict:
        vec, tag = dict(mat), {}
        while vec:
            pivot = min(vec, key=_key_order)
            hit = self.rows.get(pivot)
            if hit is None:
                raise RealizationError("matrix outside the realization span")
            c = vec[pivot]
            vadd(vec, hit[0], -c)
            vadd(tag, hit[1], -c)
        return {k: -v for k, v in tag.items()}


# ---------------------------------------------------------------------------
# Abstract realizations from the Cartan matrix (G2, E6).
# ---------------------------------------------------------------------------

class _RootVectorTable:
    """Structure constants over the basis {x_r : r in R} + simple coroots.

    Symbols are ("x", signed_decomp) and ("h", i).  The positive-positive
    constants are supplied by the caller; negative-negative ones follow the
    Chevalley rule N(-a,-b) = -N(a,b); mixed brackets are derived by a
    terminating height induction on the negative argument; [x_r, x_{-r}] is
    whatever the induction yields (a nonzero Cartan element).
    """

    def __init__(self, rs: RootSystem, pos_constants: dict):
        self.rs = rs
        self.n = rs.rank
        self.A = rs.cartan_matrix
        self.pos = {}
        for (a, b), c in pos_constants.items():
            self.pos[(a, b)] = Fraction(c)
            self.pos[(b, a)] = -Fraction(c)
        self.defn = {}  # positive decomp -> (delta, simple index)
        for r in sorted(rs.positive_roots, key=lambda r: (r.height, r.decomp)):
            if r.height == 1:
                continue
            g = r.decomp
            for i in range(self.n):
                d = tuple(c - (1 if j == i else 0) for j, c in enumerate(g))
                if rs.is_root(d) and any(c > 0 for c in d):
                    if (d, _unit(self.n, i)) not in self.pos:
                        continue
                    self.defn[g] = (d, i)
                    break
            else:
                raise RealizationError(f"no defining pair for {g}")
        self._mixed = {}  # (pos_decomp, neg_simple_or_general) cache
        self._fill_mixed()

    def coroot_vector(self, decomp) -> dict:
        d = self.rs.symmetrizers
        lensq = self.rs.inner(decomp, decomp)
        return {
            ("h", i): Fraction(2 * c * d[i], lensq)
            for i, c in enumerate(decomp)
            if c
        }

    def _fill_mixed(self):
        # stage one: [x_g, x_{-s}] for positive g, simple s, by height of g
        order = sorted(self.rs.positive_roots, key=lambda r: (r.height, r.decomp))
        for r in order:
            g = r.decomp
            for s in range(self.n):
                self._mixed[(g, s)] = self._mixed_simple(g, s)
        # stage two: [x_g, x_{-m}] for ht m >= 2, by height of m
        for rm in order:
            if rm.height == 1:
                continue
            m = rm.decomp
            delta, s = self.defn[m]
            scale = F1 / (-self.pos[(delta, _unit(self.n, s))])
            for rg in order:
                g = rg.decomp
                total = tuple(a - b for a, b in zip(g, m))
                if any(total) and not self.rs.is_root(total):
                    continue
                # x_{-m} = scale * [x_{-delta}, x_{-s}]
                t1 = self.bracket(self.bracket_x(g, _neg(delta)), {("x", _neg(_unit(self.n, s))): F1})
                t2 = self.bracket({("x", _neg(delta)): F1}, self.bracket_x(g, _neg(_unit(self.n, s))))
                out = {}
                vadd(out, t1, scale)
                vadd(out, t2, scale)
                self._mixed[(g, m)] = out

    def _mixed_simple(self, g, s) -> dict:
        ht = sum(g)
        sv = _unit(self.n, s)
        if ht == 1:
            if g == sv:
                return self.coroot_vector(g)
            return {}
        total = tuple(a - b for a, b in zip(g, sv))
        if any(total) and not self.rs.is_root(total):
            return {}
        delta, sg = self.defn[g]
        sgv = _unit(self.n, sg)
        scale = F1 / self.pos[(delta, sgv)]
        # x_g = scale [x_delta, x_sg]; [x_g, x_{-s}] =
        #   scale ([x_delta, [x_sg, x_{-s}]] - [x_sg, [x_delta, x_{-s}]])
        inner1 = self._mixed[(sgv, s)]
        inner2 = self._mixed[(delta, s)]
        t1 = self.bracket({("x", delta): F1}, inner1)
        t2 = self.bracket({("x", sgv): F1}, inner2)
        out = {}
        vadd(out, t1, scale)
        vadd(out, t2, -scale)
        return out

    def bracket_x(self, g, signed) -> dict:
        """[x_g, x_signed] with g positive, signed any root, from filled data."""
        if all(c >= 0 for c in signed):
            return self._pos_bracket(g, signed)
        m = _neg(signed)
        total = tuple(a - b for a, b in zip(g, m))
        if any(total) and not self.rs.is_root(total):
            return {}
        key = (g, m.index(1)) if sum(m) == 1 else (g, m)
        hit = self._mixed.get(key)
        if hit is None:
            raise RealizationError("mixed bracket missing")
        return hit

    def _pos_bracket(self, a, b) -> dict:
        if a == b:
            return {}
        total = tuple(x + y for x, y in zip(a, b))
        if not self.rs.is_root(total):
            return {}
        c = self.pos.get((a, b))
        if c is None:
            raise RealizationError(f"missing positive constant ({a},{b})")
        return {("x", total): c}

    def bracket_sym(self, sa, sb) -> dict:
        if sa == sb:
            return {}
        ka, kb = sa[0], sb[0]
        if ka == "h" and kb == "h":
            return {}
        if ka == "h":
            i, w = sa[1], sb[1]
            pairing = sum(self.A[i][j] * w[j] for j in range(self.n))
            return {sb: Fraction(pairing)} if pairing else {}
        if kb == "h":
            return {k: -v for k, v in self.bracket_sym(sb, sa).items()}
        da, db = sa[1], sb[1]
        pa, pb = all(c >= 0 for c in da), all(c >= 0 for c in db)
        if pa:
            return self.bracket_x(da, db)
        if pb:
            return {k: -v for k, v in self.bracket_x(db, da).items()}
        # both negative: Chevalley mirror of the positive constants
        na, nb = _neg(da), _neg(db)
        total = tuple(x + y for x, y in zip(na, nb))
        if not self.rs.is_root(total):
            return {}
        c = self.pos.get((na, nb))
        if c is None:
            raise RealizationError(f"missing positive constant ({na},{nb})")
        return {("x", _neg(total)): -c}

    def bracket(self, xvec: dict, yvec: dict) -> dict:
        out = {}
        for s1, c1 in xvec.items():
            for s2, c2 in yvec.items():
                vadd(out, self.bracket_sym(s1, s2), c1 * c2)
        return out


def _neg(decomp):
    return tuple(-c for c in decomp)


def _unit(n, i):
    return tuple(1 if j == i else 0 for j in range(n))


def _proportionality(x: dict, y: dict):
    """Scale s with x = s*y, or None."""
    if not x or not y or set(x) != set(y):
        return None
    k0, v0 = next(iter(y.items()))
    s = x[k0] / v0
    for k, v in y.items():
        if x[k] != s * v:
            return None
    return s


# Positive-part constants of G2 over simple roots a=(1,0) short, b=(0,1) long,
# anchored at [x_b, x_a] = x_{a+b} and closed under the Jacobi identity:
#   [x_{a+b}, x_a] = 2 x_{2a+b},  [x_{2a+b}, x_a] = 3 x_{3a+b},
#   [x_{3a+b}, x_b] = x_{3a+2b},  [x_{a+b}, x_{2a+b}] = 3 x_{3a+2b}.
_G2_POS_CONSTANTS = {
    ((0, 1), (1, 0)): 1,
    ((1, 1), (1, 0)): 2,
    ((2, 1), (1, 0)): 3,
    ((3, 1), (0, 1)): 1,
    ((1, 1), (2, 1)): 3,
}


def _simply_laced_pos_constants(rs: RootSystem) -> dict:
    """Positive structure constants from a lattice 2-cocycle sign."""
    n = rs.rank
    A = rs.cartan_matrix

    def eps(u, v):
        total = 0
        for i in range(n):
            if not u[i]:
                continue
            for j in range(n):
                if not v[j]:
                    continue
                if i == j:
                    total += u[i] * v[j]
                elif i < j:
                    total += u[i] * v[j] * A[i][j]
        return 1 if total % 2 == 0 else -1

    out = {}
    positives = [r.decomp for r in rs.positive_roots]
    pos_set = set(positives)
    for i, a in enumerate(positives):
        for b in positives[i + 1:]:
            t = tuple(x + y for x, y in zip(a, b))
            if t in pos_set:
                out[(a, b)] = eps(a, b)
    return out


def _build_abstract_basis(rs: RootSystem) -> ChevalleyBasis:
    if rs.type.series == "G":
        table = _RootVectorTable(rs, _G2_POS_CONSTANTS)
    else:
        table = _RootVectorTable(rs, _simply_laced_pos_constants(rs))
    # choose f_r = sign * x_{-r} with [e_r, f_r] = +coroot(r)
    f_sign = {}
    for r in rs.positive_roots:
        t = table.bracket_x(r.decomp, _neg(r.decomp))
        target = table.coroot_vector(r.decomp)
        s = _proportionality(t, target)
        if s is None or s == 0:
            raise RealizationError(f"[e, f] is not a coroot multiple at {r}")
        if s * s != 1:
            raise RealizationError(f"non-unit coroot normalization at {r}")
        f_sign[r.decomp] = s
    symbols = (
        [("x", r.decomp) for r in rs.positive_roots]
        + [("x", _neg(r.decomp)) for r in rs.positive_roots]
        + [("h", i) for i in range(rs.rank)]
    )
    sym_index = {s: i for i, s in enumerate(symbols)}

    def basis_scale(sym):
        if sym[0] == "x" and any(c < 0 for c in sym[1]):
            return f_sign[_neg(sym[1])]
        return F1

    labels = [f"e[{rs.render_root(r)}]" for r in rs.positive_roots]
    labels += [f"f[{rs.render_root(r)}]" for r in rs.positive_roots]
    labels += [f"h{i + 1}" for i in range(rs.rank)]
    cb = ChevalleyBasis(rs=rs, labels=labels, matrices=None)
    cb._pos_index = {r.decomp: i for i, r in enumerate(rs.positive_roots)}
    dim = len(symbols)
    for i in range(dim):
        si = symbols[i]
        for j in range(i + 1, dim):
            sj = symbols[j]
            raw = table.bracket_sym(si, sj)
            scale = basis_scale(si) * basis_scale(sj)
            vec = {}
            for s, c in raw.items():
                vec[sym_index[s]] = c * scale / basis_scale(s)
            cb._bracket_table[(i, j)] = {k: v for k, v in vec.items() if v}
    return cb


def build_realization(rs: RootSystem) -> ChevalleyBasis:
    series = rs.type.series
    if series in "ABCD":
        return _build_matrix_basis(rs)
    if series in "GE":
        return _build_abstract_basis(rs)
    raise RealizationError(f"no classical realization for {rs.type} (none is needed)")


# ---------------------------------------------------------------------------
# The r-matrix and coisotropy checks.
# ---------------------------------------------------------------------------

def killing_lambda(cb: ChevalleyBasis, alpha: Root) -> Fraction:
    """1 / K(e_alpha, f_alpha)."""
    key = alpha.decomp
    hit = cb._killing_cache.get(key)
    if hit is None:
        k = cb.killing(cb.e(alpha), cb.f(alpha))
        if k == 0:
            raise RealizationError(f"degenerate Killing pairing at {alpha}")
        hit = F1 / k
        cb._killing_cache[key] = hit
    return hit


def wedge_canonical(i: int, j: int, c: Fraction):
    if i == j or not c:
        return None
    return (i, j, c) if i < j else (j, i, -c)


def bivector(terms) -> dict:
    out = {}
    for i, j, c in terms:
        t = wedge_canonical(i, j, c)
        if t is None:
            continue
        a, b, cc = t
        w = out.get((a, b), F0) + cc
        if w:
            out[(a, b)] = w
        else:
            out.pop((a, b), None)
    return out


def build_r_matrix(cb: ChevalleyBasis) -> dict:
    terms = []
    for r in cb.rs.positive_roots:
        lam = killing_lambda(cb, r)
        terms.append((cb.e_index(r), cb.f_index(r), lam))
    return bivector(terms)


def ad_bivector(cb: ChevalleyBasis, x: dict, b: dict) -> dict:
    """[x, b] extended as a derivation over wedge legs."""
    terms = []
    for (i, j), c in b.items():
        vi = cb.bracket(x, {i: F1})
        for k, v in vi.items():
            terms.append((k, j, c * v))
        vj = cb.bracket(x, {j: F1})
        for k, v in vj.items():
            terms.append((i, k, c * v))
    return bivector(terms)


def coisotropic_generators(cb: ChevalleyBasis, b: dict):
    """Reduced echelon basis of the image of the contraction map of b."""
    span = FractionSpan()
    rows = {}
    for (i, j), c in b.items():
        vadd(rows.setdefault(i, {}), {j: c})
        vadd(rows.setdefault(j, {}), {i: -c})
    for vec in rows.values():
        if vec:
            span.add(vec)
    return span.echelon_basis()


@dataclass
class ClassicalReport:
    closure_ok: bool
    coideal_ok: bool
    generators: list
    failing_pair: tuple | None = None
    failing_generator: int | None = None

    @property
    def passed(self):
        return self.closure_ok and self.coideal_ok


def check_coisotropic(cb: ChevalleyBasis, pi: dict, gens: list) -> ClassicalReport:
    """Closure ([g_i,g_j] in span) and coideal ([g_i, pi] in span wedge g)."""
    span = FractionSpan()
    for g in gens:
        span.add(g)
    closure_ok, failing_pair = True, None
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            br = cb.bracket(gens[i], gens[j])
            if not span.contains(br):
                closure_ok, failing_pair = False, (i, j)
                break
        if not closure_ok:
            break
    # coideal: project both wedge legs onto the quotient by the span;
    # delta(g) lies in span wedge g iff the double projection vanishes
    coideal_ok, failing_generator = True, None
    for gi, g in enumerate(gens):
        delta = ad_bivector(cb, g, pi)
        proj = {}
        for (i, j), c in delta.items():
            pi_i, _ = span.reduce({i: F1})
            pi_j, _ = span.reduce({j: F1})
            for a, va in pi_i.items():
                for b, vb in pi_j.items():
                    t = wedge_canonical(a, b, c * va * vb)
                    if t is None:
                        continue
                    x, y, cc = t
                    w = proj.get((x, y), F0) + cc
                    if w:
                        proj[(x, y)] = w
                    else:
                        proj.pop((x, y), None)
        if proj:
            coideal_ok, failing_generator = False, gi
            break
    return ClassicalReport(
        closure_ok=closure_ok,
        coideal_ok=coideal_ok,
        generators=gens,
        failing_pair=failing_pair,
        failing_generator=failing_generator,
    )


def check_master_equation(cb: ChevalleyBasis, x: dict, pi: dict) -> bool:
    """True iff [x, [x, pi]] = 0."""
    return not ad_bivector(cb, x, ad_bivector(cb, x, pi))
