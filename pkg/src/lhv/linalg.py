"""Exact Gaussian elimination over a pluggable scalar backend.

Rows are sparse ``{column: scalar}`` dicts; scalars are Fractions or Quad
values (anything with exact ``+ - * /`` and a truthy zero test).  Pivots
are chosen column-major, so pivot columns are always the lexicographically
earliest independent set -- this is what makes "free variables = 0"
solutions canonical.
"""

from __future__ import annotations

from fractions import Fraction


def _exact(value):
    """Ints become Fractions so that pivot division never produces floats."""
    return Fraction(value) if isinstance(value, int) else value


class LinearSystem:
    """Accumulates equations ``sum(coeffs[j] * x_j) = rhs`` and solves exactly."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[dict] = []
        self.rhs: list = []

    def add_equation(self, coeffs: dict, rhs=0):
        row = {j: _exact(c) for j, c in coeffs.items() if c}
        if not row and not rhs:
            return
        self.rows.append(row)
        self.rhs.append(_exact(rhs))

    def _eliminate(self):
        """Column-major elimination to reduced row echelon form.

        Returns (pivot_rows, pivot_cols, inconsistent) where pivot_rows[k]
        is the reduced row whose pivot is pivot_cols[k].
        """
        pending = [(dict(r), v) for r, v in zip(self.rows, self.rhs)]
        pivot_rows: list[tuple[dict, object]] = []
        pivot_cols: list[int] = []
        for col in range(self.ncols):
            pick = None
            for idx, (row, _) in enumerate(pending):
                if row.get(col):
                    if pick is None or len(row) < len(pending[pick][0]):
                        pick = idx
            if pick is None:
                continue
            prow, prhs = pending.pop(pick)
            inv = prow[col]
            if inv != 1:
                prow = {j: c / inv for j, c in prow.items()}
                prhs = prhs / inv
            # eliminate from remaining rows
            for k, (row, v) in enumerate(pending):
                f = row.get(col)
                if f:
                    new = dict(row)
                    for j, c in prow.items():
                        s = new.get(j, 0) - f * c
                        if s:
                            new[j] = s
                        else:
                            new.pop(j, None)
                    pending[k] = (new, v - f * prhs)
            # and from earlier pivot rows (full reduction)
            for k, (row, v) in enumerate(pivot_rows):
                f = row.get(col)
                if f:
                    new = dict(row)
                    for j, c in prow.items():
                        s = new.get(j, 0) - f * c
                        if s:
                            new[j] = s
                        else:
                            new.pop(j, None)
                    pivot_rows[k] = (new, v - f * prhs)
            pivot_rows.append((prow, prhs))
            pivot_cols.append(col)
            pending = [(r, v) for r, v in pending if r or v]
        inconsistent = any(not r and v for r, v in pending)
        return pivot_rows, pivot_cols, inconsistent

    def solve(self):
        """A particular solution with all free variables zero, or None.

        The result is a ``{column: scalar}`` dict over the pivot columns
        (missing columns are zero).
        """
        pivot_rows, pivot_cols, inconsistent = self._eliminate()
        if inconsistent:
            return None
        return {c: v for (row, v), c in zip(pivot_rows, pivot_cols) if v}

    def nullspace(self):
        """Basis of the homogeneous solution space, one vector per free column.

        The free coordinate is the plain integer 1; it mixes exactly with
        either scalar backend.
        """
        pivot_rows, pivot_cols, _ = self._eliminate()
        pivot_set = set(pivot_cols)
        basis = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            vec = {free: 1}
            for (row, _), pcol in zip(pivot_rows, pivot_cols):
                c = row.get(free)
                if c:
                    vec[pcol] = -c
            basis.append(vec)
        return basis

    def rank(self) -> int:
        return len(self._eliminate()[1])
