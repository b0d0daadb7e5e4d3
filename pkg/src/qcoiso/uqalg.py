"""The non-negative Borel part of a quantized enveloping algebra.

Elements (NCPoly) are finite sums of terms K^v * E_{w_1} ... E_{w_d} indexed
by an integer K-exponent vector v and a word w over the generator alphabet,
with coefficients in Q(q).  K-factors are kept normal-ordered on the left;
words stay free.  Reduction modulo the q-Serre ideal happens only inside
membership solves, through per-multidegree normal-form tables built from the
relation span, so large word spaces are never materialized.

The normal-form table at a multidegree mu is constructed incrementally: the
quotient at mu is spanned by {b . E_i} over the quotient bases at mu-alpha_i,
and the only new relations are the folded images of b . R over the Serre
relations R with content inside mu.  Row reduction of those images yields the
quotient basis (the non-pivot words) and the rewrite map used for folding at
the next degree up.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .qfield import RF_ONE, RatFunc, q_binomial
from .rootsys import RootSystem


class UqAlgebraError(ValueError):
    pass


class DegreeOverflowError(UqAlgebraError):
    pass


# ---------------------------------------------------------------------------
# Elements.
# ---------------------------------------------------------------------------

class NCPoly:
    """A Borel element: {(kexp, word): coefficient} with zero coefficients
    stripped.  Instances are treated as immutable."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = terms

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((len(w) for _, w in self.terms), default=0)

    def __eq__(self, other):
        return isinstance(other, NCPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return NCPoly(self.alg, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return NCPoly(self.alg, {k: -c for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, NCPoly):
            return self.alg.nc_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        if isinstance(c, int):
            c = RatFunc.from_int(c)
        if not c:
            return NCPoly(self.alg, {})
        return NCPoly(self.alg, {k: v * c for k, v in self.terms.items()})

    def components(self):
        """Split into multihomogeneous parts keyed by (kexp, content)."""
        out = {}
        for (kexp, word), c in self.terms.items():
            key = (kexp, self.alg.content_of(word))
            out.setdefault(key, {})[(kexp, word)] = c
        return {k: NCPoly(self.alg, v) for k, v in out.items()}

    def render(self):
        if not self.terms:
            return "0"
        bits = []
        for (kexp, word) in sorted(self.terms, key=lambda t: (t[0], len(t[1]), t[1])):
            c = self.terms[(kexp, word)]
            factors = []
            for i, v in enumerate(kexp):
                if v == 1:
                    factors.append(f"K{i + 1}")
                elif v:
                    factors.append(f"K{i + 1}^{v}")
            factors.extend(f"E{i + 1}" for i in word)
            body = " ".join(factors) if factors else "1"
            bits.append(f"{c.render()} * {body}")
        return "  +  ".join(bits)

    def __repr__(self):
        return self.render()


class TensorElem:
    """An element of the two-fold tensor square, with NCPoly-style legs."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, TensorElem) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return TensorElem(self.alg, out)

    def __sub__(self, other):
        return self + TensorElem(self.alg, {k: -c for k, c in other.terms.items()})

    def __mul__(self, other):
        alg = self.alg
        out = {}
        for (l1, r1), c1 in self.terms.items():
            for (l2, r2), c2 in other.terms.items():
                lt, lc = alg.term_mul(l1, l2)
                rt, rc = alg.term_mul(r1, r2)
                c = c1 * c2 * lc * rc
                if not c:
                    continue
                key = (lt, rt)
                s = out.get(key)
                s = c if s is None else s + c
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return TensorElem(alg, out)


@dataclass
class SerreIdeal:
    """The two-sided q-Serre ideal, with its per-degree quotient machinery."""

    alg: "UqBorel"
    relations: list  # [(i, j, NCPoly)]

    def quotient_basis(self, degree, word_order=None):
        return self.alg.quotient_basis(degree, word_order)


# ---------------------------------------------------------------------------
# The algebra context.
# ---------------------------------------------------------------------------

class UqBorel:
    def __init__(self, rs: RootSystem, max_degree: int = 10, word_order: str = "deglex"):
        self.rs = rs
        self.rank = rs.rank
        self.A = rs.cartan_matrix
        self.d = rs.symmetrizers
        self.max_degree = max_degree
        self.word_order = word_order
        # crossing data: moving K^v leftward past E_l costs q^(-v . cross[l])
        self.cross = [
            tuple(self.d[i] * self.A[i][l] for i in range(self.rank))
            for l in range(self.rank)
        ]
        self._tables = {}
        self._lock = threading.Lock()
        rels = []
        for i in range(self.rank):
            for j in range(self.rank):
                if i == j:
                    continue
                rels.append((i, j, self._serre_poly(i, j)))
        self.serre_ideal = SerreIdeal(alg=self, relations=rels)

    # -- element constructors ----------------------------------------------

    def zero(self) -> NCPoly:
        return NCPoly(self, {})

    def one(self) -> NCPoly:
        return NCPoly(self, {((0,) * self.rank, ()): RF_ONE})

    def gen(self, i: int) -> NCPoly:
        """E_{i+1} for 0-based index i."""
        if not 0 <= i < self.rank:
            raise UqAlgebraError(f"generator index {i} out of range")
        return NCPoly(self, {((0,) * self.rank, (i,)): RF_ONE})

    def k_monomial(self, kexp) -> NCPoly:
        kexp = tuple(kexp)
        if len(kexp) != self.rank:
            raise UqAlgebraError("K-exponent vector has wrong length")
        return NCPoly(self, {(kexp, ()): RF_ONE})

    def from_terms(self, terms) -> NCPoly:
        out = {}
        for kexp, word, c in terms:
            if not c:
                continue
            key = (tuple(kexp), tuple(word))
            s = out.get(key)
            s = c if s is None else s + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return NCPoly(self, out)

    def content_of(self, word):
        content = [0] * self.rank
        for l in word:
            content[l] += 1
        return tuple(content)

    def weight_of(self, x: NCPoly):
        """Common word content of x, or raise if mixed."""
        contents = {self.content_of(w) for _, w in x.terms}
        if len(contents) != 1:
            raise UqAlgebraError("element is not multihomogeneous")
        return contents.pop()

    # -- multiplication -----------------------------------------------------

    def term_mul(self, t1, t2):
        """Product of two normal-ordered terms: (term, q-power factor)."""
        (k1, w1), (k2, w2) = t1, t2
        shift = 0
        if any(k2):
            for l in w1:
                cr = self.cross[l]
                shift -= sum(k2[i] * cr[i] for i in range(self.rank) if k2[i])
        term = (tuple(a + b for a, b in zip(k1, k2)), w1 + w2)
        return term, RatFunc.q_power(shift)

    def nc_mul(self, a: NCPoly, b: NCPoly) -> NCPoly:
        if a.alg is not b.alg:
            raise UqAlgebraError("elements of different algebras")
        out = {}
        for t1, c1 in a.terms.items():
            for t2, c2 in b.terms.items():
                term, factor = self.term_mul(t1, t2)
                c = c1 * c2 * factor
                if not c:
                    continue
                s = out.get(term)
                s = c if s is None else s + c
                if s:
                    out[term] = s
                else:
                    out.pop(term, None)
        return NCPoly(self, out)

    def q_bracket(self, a: NCPoly, b: NCPoly, k: int) -> NCPoly:
        """[a, b]_{q^k} = a b - q^k b a."""
        return self.nc_mul(a, b) - RatFunc.q_power(k) * self.nc_mul(b, a)

    # -- Serre relations ------------------------------------------------------

    def _serre_poly(self, i, j) -> NCPoly:
        m = 1 - self.A[i][j]
        terms = []
        for r in range(m + 1):
            c = q_binomial(m, r, self.d[i])
            if r % 2:
                c = -c
            word = (i,) * (m - r) + (j,) + (i,) * r
            terms.append(((0,) * self.rank, word, c))
        return self.from_terms(terms)

    # -- coproduct ------------------------------------------------------------

    def coproduct(self, x: NCPoly) -> TensorElem:
        out = {}
        zero_k = (0,) * self.rank
        for (kexp, word), coeff in x.terms.items():
            parts = {((kexp, ()), (kexp, ())): coeff}
            for l in word:
                nxt = {}
                kl = tuple(1 if i == l else 0 for i in range(self.rank))
                for ((lk, lw), (rk, rw)), c in parts.items():
                    # left := left * E_l, right := right * K_l (crossing)
                    shift = -sum(
                        self.cross[m][l] for m in rw
                    )
                    t1 = ((lk, lw + (l,)), (tuple(a + b for a, b in zip(rk, kl)), rw))
                    c1 = c * RatFunc.q_power(shift)
                    s = nxt.get(t1)
                    s = c1 if s is None else s + c1
                    if s:
                        nxt[t1] = s
                    else:
                        nxt.pop(t1, None)
                    # right := right * E_l
                    t2 = ((lk, lw), (rk, rw + (l,)))
                    s = nxt.get(t2)
                    s = c if s is None else s + c
                    if s:
                        nxt[t2] = s
                    else:
                        nxt.pop(t2, None)
                parts = nxt
            for key, c in parts.items():
                s = out.get(key)
                s = c if s is None else s + c
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return TensorElem(self, out)

    # -- the normal-form engine ------------------------------------------------

    def order_key(self, word):
        if self.word_order == "deglex":
            return (len(word), word)
        if self.word_order == "degrevlex":
            return (len(word), tuple(-l for l in reversed(word)))
        raise UqAlgebraError(f"unknown word order {self.word_order!r}")

    def table(self, mu):
        mu = tuple(mu)
        hit = self._tables.get(mu)
        if hit is not None:
            return hit
        if sum(mu) > self.max_degree:
            raise DegreeOverflowError(
                f"multidegree {mu} exceeds max_degree={self.max_degree}; "
                f"raise max_degree to verify at this depth"
            )
        with self._lock:
            return self._build_down_to(mu)

    def _build_down_to(self, mu):
        todo = [()]
        grid = []
        for i, m in enumerate(mu):
            grid.append(range(m + 1))
        from itertools import product

        subs = sorted(product(*grid), key=lambda v: (sum(v), v))
        for sub in subs:
            if sub not in self._tables:
                self._tables[sub] = self._build_table(sub)
        return self._tables[mu]

    def _build_table(self, mu):
        deg = sum(mu)
        if deg == 0:
            return _NFTable(basis=[()], raise_map={})
        # candidate words: basis(mu - alpha_i) extended by the letter i
        candidates = []
        for i in range(self.rank):
            if mu[i] == 0:
                continue
            sub = tuple(m - (1 if j == i else 0) for j, m in enumerate(mu))
            for b in self._tables[sub].basis:
                candidates.append(b + (i,))
        candidates.sort(key=self.order_key)
        col = {w: n for n, w in enumerate(candidates)}
        # relation rows: folded images of b . R for every Serre relation R
        rows = []
        for (i, j, rel) in self.serre_ideal.relations:
            rel_content = self.content_of(next(iter(rel.terms))[1])
            nu = tuple(m - c for m, c in zip(mu, rel_content))
            if any(c < 0 for c in nu):
                continue
            for b in self._tables[nu].basis:
                row = {}
                for (_, w), c in rel.terms.items():
                    vec = self._fold_word(b, w[:-1], nu)
                    last = w[-1]
                    for bw, cc in vec.items():
                        key = col[bw + (last,)]
                        s = row.get(key)
                        s = c * cc if s is None else s + c * cc
                        if s:
                            row[key] = s
                        else:
                            row.pop(key, None)
                if row:
                    rows.append(row)
        pivots = _rref(rows)
        basis = [w for w in candidates if col[w] not in pivots]
        # rewrite map: candidate word -> vector over the new basis
        expand = {}
        for w in candidates:
            n = col[w]
            if n in pivots:
                expand[w] = {
                    candidates[m]: -c for m, c in pivots[n].items() if m != n
                }
            else:
                expand[w] = {w: RF_ONE}
        raise_map = {}
        for i in range(self.rank):
            if mu[i] == 0:
                continue
            sub = tuple(m - (1 if j == i else 0) for j, m in enumerate(mu))
            raise_map[i] = {
                b: expand[b + (i,)] for b in self._tables[sub].basis
            }
        return _NFTable(basis=basis, raise_map=raise_map)

    def _fold_word(self, b, letters, start_mu):
        """Normal form of the word b + letters, starting from basis word b."""
        vec = {b: RF_ONE}
        mu = list(start_mu)
        for l in letters:
            mu[l] += 1
            tbl = self._tables[tuple(mu)]
            rm = tbl.raise_map[l]
            nxt = {}
            for bw, c in vec.items():
                for w2, c2 in rm[bw].items():
                    s = nxt.get(w2)
                    cc = c * c2
                    s = cc if s is None else s + cc
                    if s:
                        nxt[w2] = s
                    else:
                        nxt.pop(w2, None)
            vec = nxt
        return vec

    def nf_word(self, word):
        """Normal form of a raw word as a vector over the quotient basis."""
        mu = self.content_of(word)
        self.table(mu)
        return self._fold_word((), word, (0,) * self.rank)

    def nf_components(self, x: NCPoly):
        """Normal forms per (kexp, content): {key: {basis word: coeff}}."""
        out = {}
        memo = {}
        for (kexp, word), c in x.terms.items():
            mu = self.content_of(word)
            self.table(mu)
            vec = memo.get(word)
            if vec is None:
                vec = self._fold_word((), word, (0,) * self.rank)
                memo[word] = vec
            key = (kexp, mu)
            acc = out.setdefault(key, {})
            for w2, c2 in vec.items():
                s = acc.get(w2)
                cc = c * c2
                s = cc if s is None else s + cc
                if s:
                    acc[w2] = s
                else:
                    acc.pop(w2, None)
        return {k: v for k, v in out.items() if v}

    def nf_is_zero(self, x: NCPoly) -> bool:
        return not self.nf_components(x)

    def tensor_nf_is_zero(self, t: TensorElem) -> bool:
        """Whether t lies in ideal (x) U + U (x) ideal."""
        acc = {}
        memo = {}
        for ((lk, lw), (rk, rw)), c in t.terms.items():
            lvec = memo.get(lw)
            if lvec is None:
                lvec = memo[lw] = self.nf_word(lw)
            rvec = memo.get(rw)
            if rvec is None:
                rvec = memo[rw] = self.nf_word(rw)
            for bl, cl in lvec.items():
                for br, cr in rvec.items():
                    key = (lk, bl, rk, br)
                    s = acc.get(key)
                    cc = c * cl * cr
                    s = cc if s is None else s + cc
                    if s:
                        acc[key] = s
                    else:
                        acc.pop(key, None)
        return not acc

    def load_tables(self, path) -> bool:
        """Merge previously cached normal-form tables from disk."""
        import os
        import pickle

        if not path or not os.path.exists(path):
            return False
        with open(path, "rb") as fh:
            payload = pickle.load(fh)
        if payload.get("word_order") != self.word_order:
            return False
        with self._lock:
            for mu, tbl in payload["tables"].items():
                self._tables.setdefault(mu, tbl)
        return True

    def save_tables(self, path) -> None:
        import pickle

        if not path:
            return
        with open(path, "wb") as fh:
            pickle.dump({"word_order": self.word_order, "tables": self._tables}, fh)

    def quotient_basis(self, degree: int, word_order=None):
        """Words representing a basis of the degree-d quotient component."""
        if word_order is not None and word_order != self.word_order:
            raise UqAlgebraError("word order is fixed per algebra instance")
        out = []
        for mu in _compositions(degree, self.rank):
            out.extend(self.table(mu).basis)
        out.sort(key=self.order_key)
        return out

    # -- explicit ideal membership ----------------------------------------------

    def ideal_templates(self, mu):
        """Labelled spanning elements u . R_{ij} . v of the ideal at content mu."""
        out = []
        for (i, j, rel) in self.serre_ideal.relations:
            rel_content = self.content_of(next(iter(rel.terms))[1])
            rem = tuple(m - c for m, c in zip(mu, rel_content))
            if any(c < 0 for c in rem):
                continue
            for ucontent in _subcontents(rem):
                vcontent = tuple(a - b for a, b in zip(rem, ucontent))
                for u in _words_of_content(ucontent):
                    for v in _words_of_content(vcontent):
                        terms = {}
                        for (_, w), c in rel.terms.items():
                            terms[((0,) * self.rank, u + w + v)] = c
                        out.append(((u, (i, j), v), NCPoly(self, terms)))
        return out

    def ideal_membership(self, x: NCPoly):
        """Coefficients over u.R.v templates expressing x, or None.

        The element is split into multihomogeneous components; each must lie
        in the ideal at its own content.  K-prefixes factor out unchanged.
        """
        from .linalg import solve_linear_combination

        solution = {}
        for (kexp, mu), comp in x.components().items():
            target = {w: c for (_, w), c in comp.terms.items()}
            templates = [
                (label, {w: c for (_, w), c in poly.terms.items()})
                for label, poly in self.ideal_templates(mu)
            ]
            coeffs, _ = solve_linear_combination(templates, target)
            if coeffs is None:
                return None
            for label, c in coeffs.items():
                key = (kexp, label)
                s = solution.get(key)
                s = c if s is None else s + c
                if s:
                    solution[key] = s
                else:
                    solution.pop(key, None)
        return solution

    # -- membership in generator spans --------------------------------------

    def generator_products(self, gens, kexp, weight, maxdeg, min_factors=1):
        """Ordered products of the named generators matching a multidegree.

        gens: [(name, NCPoly)] with each value multihomogeneous.  Returns
        [(label, product NCPoly, factor count)] for every sequence (with
        repetition, all orderings) whose K-exponents and word contents sum to
        the target and whose total degree stays within maxdeg.
        """
        data = []
        for name, poly in gens:
            (gk, gw), = poly.components().keys()
            deg = sum(gw)
            data.append((name, poly, gk, gw, deg))
        out = []

        def rec(seq, rk, rw, rdeg):
            if not any(rk) and not any(rw):
                if len(seq) >= min_factors:
                    if seq:
                        prod = data[seq[0]][1]
                        for idx in seq[1:]:
                            prod = self.nc_mul(prod, data[idx][1])
                        label = "*".join(data[idx][0] for idx in seq)
                    else:
                        prod, label = self.one(), "1"
                    out.append((label, prod, len(seq)))
                return
            for idx, (name, poly, gk, gw, deg) in enumerate(data):
                if deg > rdeg:
                    continue
                if any(a > b for a, b in zip(gk, rk)):
                    continue
                if any(a > b for a, b in zip(gw, rw)):
                    continue
                if not any(gk) and not any(gw):
                    continue
                rec(
                    seq + [idx],
                    tuple(a - b for a, b in zip(rk, gk)),
                    tuple(a - b for a, b in zip(rw, gw)),
                    rdeg - deg,
                )

        rec([], tuple(kexp), tuple(weight), maxdeg)
        out.sort(key=lambda t: t[0])
        return out

    def subspace_membership(self, x: NCPoly, gens, maxdeg: int):
        """Decide x in span{ordered generator products, degree <= maxdeg} + ideal.

        Returns ({product label: coefficient}, residual NCPoly) or None; the
        residual is the ideal part x - sum(coeff * product), always normal-form
        zero when a solution is returned.
        """
        from .linalg import solve_linear_combination

        comps = x.components()
        if not comps:
            return {}, self.zero()
        coeffs = {}
        used = {}
        for (kexp, mu), comp in comps.items():
            products = self.generator_products(gens, kexp, mu, maxdeg, min_factors=0)
            templates = []
            for label, poly, _ in products:
                vec = {}
                for key, nf in self.nf_components(poly).items():
                    for w, c in nf.items():
                        vec[(key[0], w)] = c
                templates.append((label, vec))
                used[label] = poly
            target = {}
            for key, nf in self.nf_components(comp).items():
                for w, c in nf.items():
                    target[(key[0], w)] = c
            sol, _ = solve_linear_combination(templates, target)
            if sol is None:
                return None
            for label, c in sol.items():
                s = coeffs.get(label)
                s = c if s is None else s + c
                if s:
                    coeffs[label] = s
                else:
                    coeffs.pop(label, None)
        residual = x
        for label, c in coeffs.items():
            residual = residual - c * used[label]
        return coeffs, residual

    def expand_ideal_certificate(self, coeffs) -> NCPoly:
        out = self.zero()
        for (kexp, (u, (i, j), v)), c in coeffs.items():
            rel = next(r for (a, b, r) in self.serre_ideal.relations if (a, b) == (i, j))
            ku = self.k_monomial(kexp)
            pu = NCPoly(self, {((0,) * self.rank, u): RF_ONE})
            pv = NCPoly(self, {((0,) * self.rank, v): RF_ONE})
            out = out + c * (ku * pu * rel * pv)
        return out


@dataclass
class _NFTable:
    basis: list
    raise_map: dict


def _rref(rows):
    """Full row reduction; returns {pivot column: reduced row (pivot 1)}."""
    pivots = {}
    for row in rows:
        row = dict(row)
        while row:
            p = min(row)
            hit = pivots.get(p)
            if hit is None:
                inv = row[p].inverse()
                row = {k: v * inv for k, v in row.items()}
                pivots[p] = row
                break
            c = row.pop(p)
            for k, v in hit.items():
                if k == p:
                    continue
                s = row.get(k)
                s = -c * v if s is None else s - c * v
                if s:
                    row[k] = s
                else:
                    row.pop(k, None)
    # back-substitute so tails only involve non-pivot columns
    for p in sorted(pivots, reverse=True):
        row = pivots[p]
        for k in [k for k in row if k != p and k in pivots]:
            c = row.pop(k)
            for kk, vv in pivots[k].items():
                if kk == k:
                    continue
                s = row.get(kk)
                s = -c * vv if s is None else s - c * vv
                if s:
                    row[kk] = s
                else:
                    row.pop(kk, None)
    return pivots


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _subcontents(content):
    ranges = [range(c + 1) for c in content]
    from itertools import product

    return sorted(product(*ranges))


def _words_of_content(content):
    letters = []
    for i, c in enumerate(content):
        letters.extend([i] * c)
    yield from _distinct_permutations(tuple(letters))


def _distinct_permutations(letters):
    if not letters:
        yield ()
        return
    used = set()
    for i, l in enumerate(letters):
        if l in used:
            continue
        used.add(l)
        rest = letters[:i] + letters[i + 1:]
        for tail in _distinct_permutations(rest):
            yield (l,) + tail


# ---------------------------------------------------------------------------
# Module-level convenience functions.
# ---------------------------------------------------------------------------

def nc_mul(a: NCPoly, b: NCPoly) -> NCPoly:
    return a.alg.nc_mul(a, b)


def q_bracket(a: NCPoly, b: NCPoly, k: int) -> NCPoly:
    return a.alg.q_bracket(a, b, k)


def serre_relations(rs_or_alg) -> SerreIdeal:
    alg = rs_or_alg if isinstance(rs_or_alg, UqBorel) else UqBorel(rs_or_alg)
    return alg.serre_ideal


def coproduct(x: NCPoly) -> TensorElem:
    return x.alg.coproduct(x)


def tensor_coproduct_left(t: TensorElem):
    """Apply the coproduct to the left legs: result keyed by triples."""
    alg = t.alg
    out = {}
    for ((lk, lw), right), c in t.terms.items():
        inner = alg.coproduct(NCPoly(alg, {(lk, lw): RF_ONE}))
        for (a, b), c2 in inner.terms.items():
            key = (a, b, right)
            s = out.get(key)
            cc = c * c2
            s = cc if s is None else s + cc
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def tensor_coproduct_right(t: TensorElem):
    alg = t.alg
    out = {}
    for (left, (rk, rw)), c in t.terms.items():
        inner = alg.coproduct(NCPoly(alg, {(rk, rw): RF_ONE}))
        for (a, b), c2 in inner.terms.items():
            key = (left, a, b)
            s = out.get(key)
            cc = c * c2
            s = cc if s is None else s + cc
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out
