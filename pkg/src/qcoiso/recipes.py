"""Generator recipes for the candidate coideal subalgebras.

A recipe fixes, for one (type, positive root) case, a K-monomial exponent
vector plus an ordered list of named iterated q-bracket expressions over the
E-generators.  Built-in recipes cover the worked families (chains for the
special-linear pattern, the symplectic, even and odd orthogonal patterns, both
nontrivial G2 roots) and the E6 tables shipped as package data.

The K-exponent vector is always the simple-root decomposition of beta, which
is the unique choice whose semiclassical Cartan element is proportional to
the form-dual of beta.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources

from .rootsys import CartanType, Root, RootSystem, RootSystemError, parse_root
from .uqalg import NCPoly, UqBorel


class RecipeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Bracket expressions.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Gen:
    index: int  # 0-based generator index


@dataclass(frozen=True)
class QBr:
    lhs: "BracketExpr"
    rhs: "BracketExpr"
    power: int


@dataclass(frozen=True)
class Ref:
    name: str


BracketExpr = object  # Gen | QBr | Ref


def eval_bracket_expr(expr, alg: UqBorel, aux=None) -> NCPoly:
    if isinstance(expr, Gen):
        return alg.gen(expr.index)
    if isinstance(expr, QBr):
        return alg.q_bracket(
            eval_bracket_expr(expr.lhs, alg, aux),
            eval_bracket_expr(expr.rhs, alg, aux),
            expr.power,
        )
    if isinstance(expr, Ref):
        if not aux or expr.name not in aux:
            raise RecipeError(f"undefined auxiliary {expr.name!r}")
        return eval_bracket_expr(aux[expr.name], alg, aux)
    raise RecipeError(f"bad expression node {expr!r}")


def classical_limit_expr(expr, cb, aux=None) -> dict:
    """The same tree with plain commutators over the classical basis."""
    if isinstance(expr, Gen):
        return cb.e(cb.rs.simple_roots[expr.index])
    if isinstance(expr, QBr):
        return cb.bracket(
            classical_limit_expr(expr.lhs, cb, aux),
            classical_limit_expr(expr.rhs, cb, aux),
        )
    if isinstance(expr, Ref):
        if not aux or expr.name not in aux:
            raise RecipeError(f"undefined auxiliary {expr.name!r}")
        return classical_limit_expr(aux[expr.name], cb, aux)
    raise RecipeError(f"bad expression node {expr!r}")


@dataclass
class GeneratorRecipe:
    cartan_type: CartanType
    beta: Root
    k_monomial: tuple
    generators: list  # [(name, group, BracketExpr)]
    auxiliaries: dict = field(default_factory=dict)
    power_assignment: str = "explicit"  # or "heuristic"
    notes: str = ""

    def names(self):
        return [name for name, _, _ in self.generators]

    def max_degree(self):
        return max(_expr_degree(expr, self.auxiliaries) for _, _, expr in self.generators)

    def evaluate(self, alg: UqBorel):
        """[(name, NCPoly)] for the E-side generators; all must be nonzero."""
        out = []
        for name, _, expr in self.generators:
            val = eval_bracket_expr(expr, alg, self.auxiliaries)
            if val.is_zero():
                raise RecipeError(f"generator {name} evaluates to zero")
            out.append((name, val))
        return out


def _expr_degree(expr, aux):
    if isinstance(expr, Gen):
        return 1
    if isinstance(expr, QBr):
        return _expr_degree(expr.lhs, aux) + _expr_degree(expr.rhs, aux)
    if isinstance(expr, Ref):
        return _expr_degree(aux[expr.name], aux)
    raise RecipeError(f"bad expression node {expr!r}")


# ---------------------------------------------------------------------------
# Built-in recipes.
# ---------------------------------------------------------------------------

def _chain(start, letters, power):
    """[[ ... [start, E_{l1}]_p, E_{l2}]_p ..., E_{lk}]_p (0-based letters)."""
    out = start
    for l in letters:
        out = QBr(out, Gen(l), power)
    return out


def builtin_recipe(rs: RootSystem, beta: Root) -> GeneratorRecipe:
    series, n = rs.type.series, rs.rank
    if not rs.is_root(beta.decomp) or not beta.is_positive():
        raise RecipeError(f"{beta} is not a positive root of {rs.type}")
    if series == "A":
        i, j = _ij_of_difference(rs, beta)
        return _chain_pair_recipe(rs, beta, i, j, power=1)
    if series == "C":
        coords = rs.euclid_coords(beta)
        if coords and coords[0] == 2 and all(c == 0 for c in coords[1:]):
            return _symplectic_recipe(rs, beta)
        raise RecipeError(
            f"no built-in recipe for {rs.type} beta={rs.render_root(beta)}; "
            "supported: 2L1"
        )
    if series in "BD":
        power = 2 if series == "B" else 1
        ij = _try_ij_of_difference(rs, beta)
        if ij is not None:
            return _chain_pair_recipe(rs, beta, ij[0], ij[1], power=power)
        coords = rs.euclid_coords(beta)
        pos = [k for k, c in enumerate(coords) if c == 1]
        if len(pos) == 2 and pos[0] == 0 and sum(abs(c) for c in coords) == 2:
            j = pos[1] + 1  # 1-based
            if series == "D" and j == n:
                return _even_orthogonal_top_recipe(rs, beta)
            if series == "D":
                return _even_orthogonal_recipe(rs, beta, j)
            if j == n:
                return _odd_orthogonal_top_recipe(rs, beta)
            return _odd_orthogonal_recipe(rs, beta, j)
        raise RecipeError(
            f"no built-in recipe for {rs.type} beta={rs.render_root(beta)}; "
            "supported: L1+Lj and Li-Lj"
        )
    if series == "G":
        return _g2_recipe(rs, beta)
    if series == "E":
        return _e6_recipe(rs, beta)
    raise RecipeError(f"no built-in recipes for type {rs.type}")


def _ij_of_difference(rs, beta):
    ij = _try_ij_of_difference(rs, beta)
    if ij is None:
        raise RecipeError(f"{rs.render_root(beta)} is not of the form Li-Lj")
    return ij


def _try_ij_of_difference(rs, beta):
    coords = rs.euclid_coords(beta)
    pos = [k for k, c in enumerate(coords) if c == 1]
    neg = [k for k, c in enumerate(coords) if c == -1]
    if len(pos) == 1 and len(neg) == 1 and pos[0] < neg[0]:
        if all(c in (0, 1, -1) for c in coords):
            return pos[0] + 1, neg[0] + 1  # 1-based
    return None


def _chain_pair_recipe(rs, beta, i, j, power):
    """The two-chain pattern on nodes i..j-1 (1-based), all brackets q^power."""
    gens = []
    expr = Gen(i - 1)
    gens.append((f"X{i}", "(a)", expr))
    for k in range(i + 1, j):
        expr = QBr(expr, Gen(k - 1), power)
        gens.append((f"X{k}", "(a)", expr))
    if j - 1 > i:
        expr = Gen(j - 2)
        gens.append((f"D{j - 1}", "(b)", expr))
        for k in range(j - 3, i - 1, -1):
            expr = QBr(expr, Gen(k), power)
            gens.append((f"D{k + 1}", "(b)", expr))
    return GeneratorRecipe(
        cartan_type=rs.type,
        beta=beta,
        k_monomial=beta.decomp,
        generators=gens,
    )


def _symplectic_recipe(rs, beta):
    n = rs.rank
    gens = []
    expr = Gen(0)
    gens.append(("X1", "(a)", expr))
    for k in range(2, n):
        expr = QBr(expr, Gen(k - 1), 1)
        gens.append((f"X{k}", "(a)", expr))
    x = QBr(expr, Gen(n - 1), 2)
    gens.append(("X", "(b)", x))
    expr = x
    for k in range(n - 1, 0, -1):
        expr = QBr(expr, Gen(k - 1), 1)
        gens.append((f"Y{k}", "(b)", expr))
    return GeneratorRecipe(
        cartan_type=rs.type,
        beta=beta,
        k_monomial=beta.decomp,
        generators=gens,
    )


def _even_orthogonal_top_recipe(rs, beta):
    """beta = L1 + Ln: the two-chain pattern through the spin node."""
    n = rs.rank
    gens = []
    expr = Gen(0)
    gens.append(("X1", "(a)", expr))
    for k in range(2, n - 1):
        expr = QBr(expr, Gen(k - 1), 1)
        gens.append((f"X{k}", "(a)", expr))
    expr = Gen(n - 1)
    gens.append((f"W{n - 1}", "(b)", expr))
    for k in range(n - 2, 0, -1):
        expr = QBr(expr, Gen(k - 1), 1)
        gens.append((f"W{k}", "(b)", expr))
    return GeneratorRecipe(
        cartan_type=rs.type,
        beta=beta,
        k_monomial=beta.decomp,
        generators=gens,
    )


def _even_orthogonal_recipe(rs, beta, j):
    """beta = L1 + Lj with 2 <= j <= n-1, the six-group pattern."""
    n = rs.rank
    aux = {"T": _chain(Gen(0), range(1, j - 1), 1)}
    gens = []
    for k in range(1, j - 1):
        gens.append((f"X{k}", "(a)", _chain(Gen(0), range(1, k), 1)))
    bgroup = []
    for k in range(j, n):
        e = _chain(Gen(j - 1), range(j, k), 1)
        bgroup.append((f"B{k}", e))
        gens.append((f"B{k}", "(b)", e))
    for k, (name, e) in enumerate(bgroup):
        gens.append((f"C{j + k}", "(c)", QBr(e, Ref("T"), 1)))
    dgroup = []
    # the spin-node element; for j = n-1 the connecting chain is empty and
    # the element degenerates to the bare generator
    if j <= n - 2:
        xn = QBr(_chain(Gen(j - 1), range(j, n - 2), 1), Gen(n - 1), 1)
    else:
        xn = Gen(n - 1)
    dgroup.append((f"B{n}", xn))
    expr = xn
    for k in range(n - 1, j, -1):
        expr = QBr(expr, Gen(k - 1), 1)
        dgroup.append((f"Y{k}", expr))
    for name, e in dgroup:
        gens.append((name, "(d)", e))
    for name, e in dgroup:
        gens.append((f"{name}T", "(e)", QBr(e, Ref("T"), 1)))
    expr = QBr(dgroup[-1][1], QBr(Gen(j - 1), Gen(j - 2), 1), 1)
    gens.append((f"Y{j - 1}", "(f)", expr))
    for k in range(j - 2, 0, -1):
        expr = QBr(expr, Gen(k - 1), 1)
        gens.append((f"Y{k}", "(f)", expr))
    return GeneratorRecipe(
        cartan_type=rs.type,
        beta=beta,
        k_monomial=beta.decomp,
        generators=gens,
        auxiliaries=aux,
    )


def _odd_orthogonal_top_recipe(rs, beta):
    """beta = L1 + Ln in the odd orthogonal series; long brackets carry q^2."""
    n = rs.rank
    gens = []
    for k in range(1, n - 1):
        gens.append((f"X{k}", "(a)", _chain(Gen(0), range(1, k), 2)))
    gens.append((f"E{n}", "(b)", Gen(n - 1)))
    gens.append(
        (f"B{n}", "(b)", QBr(Gen(n - 1), _chain(Gen(0), range(1, n - 1), 2), 2))
    )
    y = QBr(Gen(n - 1), QBr(Gen(n - 1), Gen(n - 2), 2), 0)
    gens.append((f"Y{n - 1}", "(c)", y))
    expr = y
    for k in range(n - 2, 0, -1):
        expr = QBr(expr, Gen(k - 1), 2)
        gens.append((f"Y{k}", "(c)", expr))
    return GeneratorRecipe(
        cartan_type=rs.type,
        beta=beta,
        k_monomial=beta.decomp,
        generators=gens,
    )


def _odd_orthogonal_recipe(rs, beta, j):
    """beta = L1 + Lj with j < n in the odd orthogonal series."""
    n = rs.rank
    aux = {"T": _chain(Gen(0), range(1, j - 1), 2)}
    gens = []
    for k in range(1, j - 1):
        gens.append((f"X{k}", "(a)", _chain(Gen(0), range(1, k), 2)))
    bgroup = []
    for k in range(j, n):
        e = _chain(Gen(j - 1), range(j, k), 2)
        bgroup.append(e)
        gens.append((f"B{k}", "(b)", e))
    for k, e in enumerate(bgroup):
        gens.append((f"C{j + k}", "(c)", QBr(e, Ref("T"), 2)))
    dgroup = []
    xn = QBr(bgroup[-1], Gen(n - 1), 2)
    dgroup.append((f"B{n}", xn))
    yn = QBr(xn, Gen(n - 1), 0)
    dgroup.append((f"Y{n}", yn))
    expr = yn
    for k in range(n - 2, j, -1):
        expr = QBr(expr, Gen(k - 1), 2)
        dgroup.append((f"Y{k}", expr))
    for name, e in dgroup:
        gens.append((name, "(d)", e))
    for name, e in dgroup:
        gens.append((f"{name}T", "(e)", QBr(e, Ref("T"), 2)))
    expr = QBr(dgroup[-1][1], QBr(Gen(j - 1), Gen(j - 2), 2), 2)
    gens.append((f"Y{j - 1}", "(f)", expr))
    for k in range(j - 2, 0, -1):
        expr = QBr(expr, Gen(k - 1), 2)
        gens.append((f"Y{k}", "(f)", expr))
    return GeneratorRecipe(
        cartan_type=rs.type,
        beta=beta,
        k_monomial=beta.decomp,
        generators=gens,
        auxiliaries=aux,
    )


def _g2_recipe(rs, beta):
    d = beta.decomp
    e1, e2 = Gen(0), Gen(1)
    if d == (0, 1):
        gens = [("E2", "(a)", e2)]
    elif d == (3, 1):
        x = QBr(QBr(e1, e2, 3), e1, -1)
        gens = [
            ("E1", "(a)", e1),
            ("X", "(a)", x),
            ("Y", "(a)", QBr(x, e1, 1)),
        ]
    elif d == (3, 2):
        x = QBr(e2, e1, 3)
        y = QBr(x, e1, 1)
        z = QBr(y, e1, -1)
        gens = [
            ("E2", "(a)", e2),
            ("X", "(a)", x),
            ("Y", "(a)", y),
            ("Z", "(a)", z),
            ("T", "(a)", QBr(z, e2, 0)),
        ]
    else:
        raise RecipeError(
            f"no built-in recipe for G2 beta={rs.render_root(beta)}; "
            "supported: a2, 3a1+a2, 3a1+2a2"
        )
    return GeneratorRecipe(
        cartan_type=rs.type,
        beta=beta,
        k_monomial=beta.decomp,
        generators=gens,
    )


# ---------------------------------------------------------------------------
# E6 tables (package data).
# ---------------------------------------------------------------------------

_E6_CACHE = {}


def load_e6_recipes(rs: RootSystem):
    """All shipped E6 recipes keyed by root decomposition.

    Starred rows are expanded through the diagram flip 1<->6, 3<->5.  Bracket
    powers are assigned by the uniform adjacent-node heuristic (every printed
    bracket joins non-orthogonal weights, so each becomes a q^1 bracket) and
    the recipes are flagged accordingly.
    """
    if _E6_CACHE:
        return dict(_E6_CACHE)
    raw = json.loads(
        resources.files("qcoiso").joinpath("data/e6_beta_tables.json").read_text()
    )
    out = {}
    for i in range(6):
        beta = rs.find_root(tuple(1 if k == i else 0 for k in range(6)))
        out[beta.decomp] = GeneratorRecipe(
            cartan_type=rs.type,
            beta=beta,
            k_monomial=beta.decomp,
            generators=[(f"E{i + 1}", "(a)", Gen(i))],
            power_assignment="heuristic",
            notes="simple-root row",
        )
    flip = {1: 6, 6: 1, 3: 5, 5: 3, 2: 2, 4: 4}
    for row in raw["rows"]:
        beta = parse_root(rs, row["root"])
        variants = [(beta, row["generators"], "")]
        if row.get("star"):
            flipped = [_flip_expr_text(g, flip) for g in row["generators"]]
            beta2 = rs.find_root(_flip_decomp(beta.decomp, flip))
            variants.append((beta2, flipped, " (diagram-flipped variant)"))
        for b, gen_texts, extra in variants:
            gens = []
            for k, text in enumerate(gen_texts):
                expr = _parse_bracket_text(text)
                gens.append((f"G{k + 1}", "(a)", expr))
            out[b.decomp] = GeneratorRecipe(
                cartan_type=rs.type,
                beta=b,
                k_monomial=b.decomp,
                generators=gens,
                power_assignment="heuristic",
                notes=(row.get("comment", "") + extra).strip(),
            )
    _E6_CACHE.update(out)
    return dict(out)


def _flip_decomp(decomp, flip):
    out = [0] * 6
    for i, c in enumerate(decomp):
        out[flip[i + 1] - 1] = c
    return tuple(out)


def _flip_expr_text(text, flip):
    return re.sub(r"E(\d)", lambda m: f"E{flip[int(m.group(1))]}", text)


def _parse_bracket_text(text):
    """Parse 'E4' or '[X,Y]' nested bracket notation; powers default to 1."""
    text = text.strip()
    if text.startswith("E"):
        return Gen(int(text[1:]) - 1)
    if not (text.startswith("[") and text.endswith("]")):
        raise RecipeError(f"cannot parse bracket text {text!r}")
    inner = text[1:-1]
    depth = 0
    for pos, ch in enumerate(inner):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "," and depth == 0:
            return QBr(
                _parse_bracket_text(inner[:pos]),
                _parse_bracket_text(inner[pos + 1:]),
                1,
            )
    raise RecipeError(f"cannot parse bracket text {text!r}")


def _e6_recipe(rs, beta):
    table = load_e6_recipes(rs)
    hit = table.get(beta.decomp)
    if hit is None:
        raise RecipeError(
            f"no shipped E6 recipe for beta={rs.render_root(beta)}; "
            f"{len(table)} roots are covered"
        )
    return hit


# ---------------------------------------------------------------------------
# Recipe documents (JSON).
# ---------------------------------------------------------------------------

def serialize_recipe(recipe: GeneratorRecipe) -> dict:
    return {
        "type": recipe.cartan_type.series,
        "rank": recipe.cartan_type.rank,
        "beta": str(recipe.beta),
        "k_monomial": list(recipe.k_monomial),
        "power_assignment": recipe.power_assignment,
        "auxiliaries": {
            name: _expr_to_json(e) for name, e in sorted(recipe.auxiliaries.items())
        },
        "generators": [
            {"name": name, "group": group, "expr": _expr_to_json(expr)}
            for name, group, expr in recipe.generators
        ],
    }


def _expr_to_json(expr):
    if isinstance(expr, Gen):
        return {"gen": expr.index + 1}
    if isinstance(expr, QBr):
        return {"qbr": [_expr_to_json(expr.lhs), _expr_to_json(expr.rhs), expr.power]}
    if isinstance(expr, Ref):
        return {"ref": expr.name}
    raise RecipeError(f"bad expression node {expr!r}")


def parse_recipe(doc: dict, validate_nonzero: bool = True) -> GeneratorRecipe:
    try:
        ctype = CartanType(doc["type"], int(doc["rank"]))
    except (KeyError, TypeError, RootSystemError) as exc:
        raise RecipeError(f"bad type/rank: {exc}") from exc
    rs = RootSystem(ctype)
    try:
        beta = parse_root(rs, doc["beta"])
    except (KeyError, RootSystemError) as exc:
        raise RecipeError(f"bad beta: {exc}") from exc
    kmono = doc.get("k_monomial")
    if kmono is None:
        kmono = beta.decomp
    kmono = tuple(int(c) for c in kmono)
    if len(kmono) != rs.rank:
        raise RecipeError("k_monomial: wrong length")
    aux = {}
    for name, e in (doc.get("auxiliaries") or {}).items():
        aux[name] = _expr_from_json(e, rs.rank, f"auxiliaries.{name}", aux)
    gens = []
    for idx, g in enumerate(doc.get("generators") or []):
        path = f"generators[{idx}]"
        if "name" not in g or "expr" not in g:
            raise RecipeError(f"{path}: missing name or expr")
        expr = _expr_from_json(g["expr"], rs.rank, f"{path}.expr", aux)
        gens.append((str(g["name"]), str(g.get("group", "")), expr))
    if not gens:
        raise RecipeError("recipe has no generators")
    recipe = GeneratorRecipe(
        cartan_type=ctype,
        beta=beta,
        k_monomial=kmono,
        generators=gens,
        auxiliaries=aux,
        power_assignment=str(doc.get("power_assignment", "explicit")),
    )
    if validate_nonzero:
        alg = UqBorel(rs, max_degree=max(recipe.max_degree(), 1))
        recipe.evaluate(alg)
    return recipe


def _expr_from_json(e, rank, path, aux):
    if not isinstance(e, dict):
        raise RecipeError(f"{path}: expected an object")
    if "gen" in e:
        idx = e["gen"]
        if not isinstance(idx, int) or not 1 <= idx <= rank:
            raise RecipeError(f"{path}.gen: index {idx!r} out of range 1..{rank}")
        return Gen(idx - 1)
    if "qbr" in e:
        parts = e["qbr"]
        if not isinstance(parts, list) or len(parts) != 3:
            raise RecipeError(f"{path}.qbr: expected [lhs, rhs, power]")
        if not isinstance(parts[2], int):
            raise RecipeError(f"{path}.qbr: power must be an integer")
        return QBr(
            _expr_from_json(parts[0], rank, f"{path}.qbr[0]", aux),
            _expr_from_json(parts[1], rank, f"{path}.qbr[1]", aux),
            parts[2],
        )
    if "ref" in e:
        name = e["ref"]
        if name not in aux:
            raise RecipeError(f"{path}.ref: unknown auxiliary {name!r}")
        return Ref(name)
    raise RecipeError(f"{path}: expected gen, qbr or ref")
