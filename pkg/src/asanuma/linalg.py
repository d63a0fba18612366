"""Row reduction over F_p on sparse rows ({column: value})."""

from __future__ import annotations

from collections.abc import Iterable


class Echelon:
    """Incrementally maintained reduced row echelon form.

    Pivot rows are kept fully reduced, so reducing a vector needs one pass
    over the pivot columns it touches.
    """

    def __init__(self, p: int):
        self.p = p
        self.pivots: dict[int, dict[int, int]] = {}

    def reduce(self, row: dict[int, int]) -> dict[int, int]:
        p = self.p
        row = {c: v % p for c, v in row.items() if v % p}
        for c in [c for c in row if c in self.pivots]:
            v = row.get(c)
            if not v:
                continue
            for j, a in self.pivots[c].items():
                nv = (row.get(j, 0) - v * a) % p
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
        return row

    def add(self, row: dict[int, int]) -> bool:
        """Insert a row; True iff it enlarged the row space."""
        r = self.reduce(row)
        if not r:
            return False
        p = self.p
        c = min(r)
        inv = pow(r[c], -1, p)
        r = {j: v * inv % p for j, v in r.items()}
        for other in self.pivots.values():
            v = other.get(c)
            if v:
                for j, a in r.items():
                    nv = (other.get(j, 0) - v * a) % p
                    if nv:
                        other[j] = nv
                    else:
                        other.pop(j, None)
        self.pivots[c] = r
        return True

    def contains(self, row: dict[int, int]) -> bool:
        return not self.reduce(row)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def rows(self) -> list[dict[int, int]]:
        return [dict(self.pivots[c]) for c in sorted(self.pivots)]


def rref(rows: Iterable[dict[int, int]], p: int) -> list[dict[int, int]]:
    ech = Echelon(p)
    for r in rows:
        ech.add(r)
    return ech.rows()


def nullspace(rows: Iterable[dict[int, int]], ncols: int, p: int) -> list[dict[int, int]]:
    """Basis of {v : M v = 0}, returned in reduced row echelon form."""
    ech = Echelon(p)
    for r in rows:
        ech.add(r)
        if ech.rank == ncols:
            return []
    free = [j for j in range(ncols) if j not in ech.pivots]
    basis = []
    for f in free:
        v = {f: 1}
        for c, prow in ech.pivots.items():
            a = prow.get(f)
            if a:
                v[c] = -a % p
        basis.append(v)
    return rref(basis, p)
