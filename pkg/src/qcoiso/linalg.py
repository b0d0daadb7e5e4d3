"""Sparse exact linear algebra over Q(q).

Vectors are dicts mapping hashable coordinate keys to nonzero RatFunc values.
The central primitive expresses a target vector as a linear combination of
template vectors and returns the full affine solution set (particular
solution plus nullspace), which downstream certificate checks need.
"""

from __future__ import annotations

from .qfield import RF_ONE, RatFunc


def vec_add_scaled(acc: dict, vec: dict, scale: RatFunc) -> None:
    """acc += scale * vec, in place, dropping zeros."""
    if not scale:
        return
    for k, v in vec.items():
        w = acc.get(k)
        w = v * scale if w is None else w + v * scale
        if w:
            acc[k] = w
        else:
            acc.pop(k, None)


def vec_scale(vec: dict, scale: RatFunc) -> dict:
    if scale == RF_ONE:
        return dict(vec)
    return {k: v * scale for k, v in vec.items()} if scale else {}


class SpanSolver:
    """Incremental row-echelon span of tagged vectors.

    Rows are added as (vector, tag) pairs; tags live in their own coordinate
    space and track which combination of the original rows produced each
    echelon row.  Solving a target yields coefficients over the original tags.
    """

    def __init__(self, key_order=None):
        # pivot key -> (vector with that pivot scaled to 1, tag vector)
        self.rows: dict = {}
        self.nullrows: list = []  # tag vectors of dependent inputs
        self._key_order = key_order or (lambda k: k)

    def _reduce(self, vec: dict, tag: dict):
        vec = dict(vec)
        tag = dict(tag)
        while vec:
            pivot = min(vec, key=self._key_order)
            hit = self.rows.get(pivot)
            if hit is None:
                return vec, tag, pivot
            c = vec[pivot]
            vec_add_scaled(vec, hit[0], -c)
            vec_add_scaled(tag, hit[1], -c)
        return vec, tag, None

    def add(self, vec: dict, tag: dict) -> bool:
        """Insert a row; returns True if it increased the rank."""
        vec, tag, pivot = self._reduce(vec, tag)
        if pivot is None:
            if tag:
                self.nullrows.append(tag)
            return False
        inv = vec[pivot].inverse()
        self.rows[pivot] = (vec_scale(vec, inv), vec_scale(tag, inv))
        return True

    def solve(self, target: dict):
        """Express target over the added rows.

        Returns a coefficient dict over tags, or None if the target is not in
        the span.  Together with `nullrows`, this describes all solutions.
        """
        vec, tag, pivot = self._reduce(dict(target), {})
        if pivot is not None:
            return None
        return {k: -v for k, v in tag.items()}

    def contains(self, vec: dict) -> bool:
        reduced, _, pivot = self._reduce(dict(vec), {})
        return pivot is None

    def rank(self) -> int:
        return len(self.rows)


def solve_linear_combination(templates, target: dict):
    """Solve target = sum_i c_i * templates[i][1].

    templates: iterable of (label, vector) pairs.
    Returns (coeffs: {label: RatFunc}, nullspace: [ {label: RatFunc} ]) or
    (None, nullspace) when the system is inconsistent.
    """
    solver = SpanSolver()
    for label, vec in templates:
        solver.add(vec, {label: RF_ONE})
    coeffs = solver.solve(target)
    return coeffs, solver.nullrows
