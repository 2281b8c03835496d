"""Parity-check matrices as Tanner graphs, plus alist I/O and a regular-code generator.

The graph is held in two CSR-style views over a single check-major edge
numbering:

- ``check_ptr`` / ``check_vars``: variables of check ``m`` are
  ``check_vars[check_ptr[m]:check_ptr[m+1]]``; the position inside that slice
  plus ``check_ptr[m]`` *is* the edge id.
- ``var_ptr`` / ``var_checks`` / ``var_edges``: checks of variable ``n`` and
  the matching edge ids, both ascending in check index.

All neighbor lists are sorted ascending, so every decoder walks edges in the
same order.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


class CodeError(ValueError):
    """Invalid parity-check structure."""


class AlistError(CodeError):
    """Malformed alist document; ``lineno`` is 1-based (0 when unknown)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


class ParityCheckMatrix:
    """Immutable sparse binary ``n_checks x n_vars`` matrix with dual adjacency."""

    __slots__ = (
        "n_vars",
        "n_checks",
        "check_ptr",
        "check_vars",
        "var_ptr",
        "var_checks",
        "var_edges",
    )

    def __init__(self, n_vars: int, n_checks: int, check_rows: Sequence[Iterable[int]]):
        if n_vars < 1 or n_checks < 1:
            raise CodeError(f"need n_vars >= 1 and n_checks >= 1, got {n_vars}, {n_checks}")
        if len(check_rows) != n_checks:
            raise CodeError(f"expected {n_checks} check rows, got {len(check_rows)}")

        rows = []
        for m, row in enumerate(check_rows):
            row = sorted(int(v) for v in row)
            for a, b in zip(row, row[1:]):
                if a == b:
                    raise CodeError(f"duplicate entry ({m}, {a})")
            if row and (row[0] < 0 or row[-1] >= n_vars):
                bad = row[0] if row[0] < 0 else row[-1]
                raise CodeError(f"variable index {bad} out of range [0, {n_vars}) in check {m}")
            if len(row) < 2:
                raise CodeError(f"check degree < 2 (check {m} has degree {len(row)})")
            rows.append(row)

        check_ptr = np.zeros(n_checks + 1, dtype=np.int64)
        check_ptr[1:] = np.cumsum([len(r) for r in rows])
        check_vars = np.fromiter((v for r in rows for v in r), dtype=np.int64, count=int(check_ptr[-1]))

        var_deg = np.bincount(check_vars, minlength=n_vars)
        if np.any(var_deg == 0):
            raise CodeError(f"variable {int(np.argmin(var_deg))} has degree 0")

        # Stable sort of check-major edge ids by variable keeps checks ascending.
        var_edges = np.argsort(check_vars, kind="stable").astype(np.int64)
        edge_check = np.repeat(np.arange(n_checks, dtype=np.int64), np.diff(check_ptr))
        var_ptr = np.zeros(n_vars + 1, dtype=np.int64)
        var_ptr[1:] = np.cumsum(var_deg)

        object.__setattr__(self, "n_vars", int(n_vars))
        object.__setattr__(self, "n_checks", int(n_checks))
        for name, arr in (
            ("check_ptr", check_ptr),
            ("check_vars", check_vars),
            ("var_ptr", var_ptr),
            ("var_checks", edge_check[var_edges]),
            ("var_edges", var_edges),
        ):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __setattr__(self, name, value):
        raise AttributeError("ParityCheckMatrix is immutable")

    def __reduce__(self):
        rows = [self.check_neighbors(m).tolist() for m in range(self.n_checks)]
        return (ParityCheckMatrix, (self.n_vars, self.n_checks, rows))

    def __eq__(self, other):
        if not isinstance(other, ParityCheckMatrix):
            return NotImplemented
        return (
            self.n_vars == other.n_vars
            and self.n_checks == other.n_checks
            and np.array_equal(self.check_ptr, other.check_ptr)
            and np.array_equal(self.check_vars, other.check_vars)
        )

    def __hash__(self):
        return hash((self.n_vars, self.n_checks, self.check_vars.tobytes(), self.check_ptr.tobytes()))

    def __repr__(self):
        return f"ParityCheckMatrix(n_vars={self.n_vars}, n_checks={self.n_checks}, n_edges={self.n_edges})"

    @property
    def n_edges(self) -> int:
        return int(self.check_ptr[-1])

    @property
    def rate(self) -> float:
        """Design rate ``1 - M/N``."""
        return 1.0 - self.n_checks / self.n_vars

    @property
    def check_degrees(self) -> np.ndarray:
        return np.diff(self.check_ptr)

    @property
    def var_degrees(self) -> np.ndarray:
        return np.diff(self.var_ptr)

    def check_neighbors(self, m: int) -> np.ndarray:
        return self.check_vars[self.check_ptr[m] : self.check_ptr[m + 1]]

    def var_neighbors(self, n: int) -> np.ndarray:
        return self.var_checks[self.var_ptr[n] : self.var_ptr[n + 1]]

    def check_edges(self, m: int) -> range:
        return range(int(self.check_ptr[m]), int(self.check_ptr[m + 1]))

    def edge_id(self, m: int, n: int) -> int:
        """Edge id of the nonzero ``(m, n)``; ``KeyError`` if ``h_mn == 0``."""
        lo, hi = int(self.check_ptr[m]), int(self.check_ptr[m + 1])
        pos = lo + int(np.searchsorted(self.check_vars[lo:hi], n))
        if pos >= hi or self.check_vars[pos] != n:
            raise KeyError((m, n))
        return pos

    def edge_checks(self) -> np.ndarray:
        """Check index of every edge, in edge-id order."""
        return np.repeat(np.arange(self.n_checks, dtype=np.int64), self.check_degrees)

    def to_dense(self) -> np.ndarray:
        H = np.zeros((self.n_checks, self.n_vars), dtype=np.uint8)
        H[self.edge_checks(), self.check_vars] = 1
        return H

    @classmethod
    def from_dense(cls, H) -> "ParityCheckMatrix":
        H = np.asarray(H)
        if H.ndim != 2:
            raise CodeError("dense matrix must be 2-D")
        if not np.isin(H, (0, 1)).all():
            raise CodeError("matrix entries must be 0 or 1")
        return cls(H.shape[1], H.shape[0], [np.flatnonzero(row) for row in H])


def from_triples(n_vars: int, n_checks: int, ones: Iterable[tuple[int, int]]) -> ParityCheckMatrix:
    """Build a matrix from ``(m, n)`` coordinates of its ones."""
    rows: list[list[int]] = [[] for _ in range(n_checks)]
    seen = set()
    for m, n in ones:
        m, n = int(m), int(n)
        if not (0 <= m < n_checks and 0 <= n < n_vars):
            raise CodeError(f"entry ({m}, {n}) out of range for {n_checks}x{n_vars} matrix")
        if (m, n) in seen:
            raise CodeError(f"duplicate entry ({m}, {n})")
        seen.add((m, n))
        rows[m].append(n)
    return ParityCheckMatrix(n_vars, n_checks, rows)


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise AlistError(f"non-integer token in {' '.join(tokens)!r}", lineno) from None


def parse_alist(text: bytes | str) -> ParityCheckMatrix:
    """Parse a MacKay alist document. Zero padding is dropped, lists re-sorted."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    raw_lines = text.splitlines()
    lines = [(i + 1, ln.split()) for i, ln in enumerate(raw_lines) if ln.strip()]

    def take(what):
        if not lines:
            raise AlistError(f"unexpected end of document while reading {what}", len(raw_lines) + 1)
        return lines.pop(0)

    lineno, tok = take("header")
    if len(tok) != 2:
        raise AlistError("header must be 'N M'", lineno)
    n_vars, n_checks = _ints(tok, lineno)
    if n_vars < 1 or n_checks < 1:
        raise AlistError("N and M must be positive", lineno)

    lineno, tok = take("maximum degrees")
    if len(tok) != 2:
        raise AlistError("second line must be 'max_dv max_dc'", lineno)
    max_dv, max_dc = _ints(tok, lineno)

    lineno, tok = take("variable degrees")
    var_deg = _ints(tok, lineno)
    if len(var_deg) != n_vars:
        raise AlistError(f"expected {n_vars} variable degrees, got {len(var_deg)}", lineno)
    if max(var_deg) != max_dv:
        raise AlistError(f"max variable degree {max(var_deg)} != declared {max_dv}", lineno)

    lineno, tok = take("check degrees")
    check_deg = _ints(tok, lineno)
    if len(check_deg) != n_checks:
        raise AlistError(f"expected {n_checks} check degrees, got {len(check_deg)}", lineno)
    if max(check_deg) != max_dc:
        raise AlistError(f"max check degree {max(check_deg)} != declared {max_dc}", lineno)

    def adjacency(count, degrees, limit, kind):
        out = []
        for i in range(count):
            lineno, tok = take(f"{kind} adjacency row {i + 1}")
            vals = [v for v in _ints(tok, lineno) if v != 0]
            if len(vals) != degrees[i]:
                raise AlistError(f"{kind} {i + 1} lists {len(vals)} neighbors, degree says {degrees[i]}", lineno)
            for v in vals:
                if not 1 <= v <= limit:
                    raise AlistError(f"index {v} out of range [1, {limit}]", lineno)
            if len(set(vals)) != len(vals):
                raise AlistError(f"duplicate neighbor in {kind} {i + 1}", lineno)
            out.append((lineno, sorted(v - 1 for v in vals)))
        return out

    var_rows = adjacency(n_vars, var_deg, n_checks, "variable")
    check_rows = adjacency(n_checks, check_deg, n_vars, "check")
    if lines:
        raise AlistError("trailing content after check adjacency", lines[0][0])

    for lineno, row in check_rows:
        if len(row) < 2:
            raise AlistError(f"check degree < 2 (degree {len(row)})", lineno)
    for n, (lineno, checks) in enumerate(var_rows):
        for m in checks:
            if n not in check_rows[m][1]:
                raise AlistError(f"variable {n + 1} lists check {m + 1} but not vice versa", lineno)
    if sum(var_deg) != sum(check_deg):
        raise AlistError("variable and check degree sums differ")

    try:
        return ParityCheckMatrix(n_vars, n_checks, [row for _, row in check_rows])
    except CodeError as exc:
        raise AlistError(str(exc)) from None


def write_alist(H: ParityCheckMatrix) -> bytes:
    """Canonical alist bytes: single spaces, rows zero-padded, trailing newline."""
    vdeg, cdeg = H.var_degrees, H.check_degrees
    max_dv, max_dc = int(vdeg.max()), int(cdeg.max())

    def row(values, width):
        vals = [int(v) + 1 for v in values]
        return " ".join(map(str, vals + [0] * (width - len(vals))))

    out = [
        f"{H.n_vars} {H.n_checks}",
        f"{max_dv} {max_dc}",
        " ".join(map(str, vdeg.tolist())),
        " ".join(map(str, cdeg.tolist())),
    ]
    out += [row(H.var_neighbors(n), max_dv) for n in range(H.n_vars)]
    out += [row(H.check_neighbors(m), max_dc) for m in range(H.n_checks)]
    return ("\n".join(out) + "\n").encode("ascii")


def load_alist(path) -> ParityCheckMatrix:
    with open(path, "rb") as fh:
        return parse_alist(fh.read())


def save_alist(H: ParityCheckMatrix, path) -> None:
    with open(path, "wb") as fh:
        fh.write(write_alist(H))


def generate_regular(n_vars: int, dv: int, dc: int, seed: int = 0, max_retries: int = 100) -> ParityCheckMatrix:
    """Random ``(dv, dc)``-regular code by socket permutation.

    A random permutation of the ``n_vars * dv`` variable sockets is cut into
    groups of ``dc``. Double edges are repaired by swapping a clashing socket
    with a random socket of another check; if the repair budget runs out the
    whole permutation is redrawn, up to ``max_retries`` times.
    """
    if dv < 1 or dc < 2:
        raise CodeError(f"need dv >= 1 and dc >= 2, got dv={dv}, dc={dc}")
    if (n_vars * dv) % dc:
        raise CodeError(f"n_vars*dv = {n_vars * dv} is not divisible by dc = {dc}")
    n_checks = n_vars * dv // dc
    if dc > n_vars:
        raise CodeError(f"check degree {dc} exceeds n_vars {n_vars}")

    rng = np.random.default_rng(seed)
    sockets = np.repeat(np.arange(n_vars), dv)
    for _ in range(max_retries):
        perm = rng.permutation(sockets).reshape(n_checks, dc)
        if _repair_double_edges(perm, rng, budget=50 * perm.size):
            return ParityCheckMatrix(n_vars, n_checks, perm.tolist())
    raise CodeError(f"could not build a simple ({dv},{dc}) graph after {max_retries} attempts")


def _repair_double_edges(perm: np.ndarray, rng: np.random.Generator, budget: int) -> bool:
    n_checks, dc = perm.shape
    sets = [set() for _ in range(n_checks)]
    clashes = []
    for m in range(n_checks):
        for j in range(dc):
            v = int(perm[m, j])
            if v in sets[m]:
                clashes.append((m, j))
            else:
                sets[m].add(v)
    # sets[m] holds the distinct members; clashing slots are the extra copies.
    while clashes:
        if budget <= 0:
            return False
        m, j = clashes[-1]
        v = int(perm[m, j])
        budget -= 1
        m2 = int(rng.integers(n_checks))
        j2 = int(rng.integers(dc))
        if m2 == m:
            continue
        w = int(perm[m2, j2])
        if w in sets[m] or v in sets[m2] or (m2, j2) in clashes:
            continue
        if np.count_nonzero(perm[m2] == w) > 1:
            continue
        sets[m2].discard(w)
        sets[m2].add(v)
        sets[m].add(w)
        perm[m, j], perm[m2, j2] = w, v
        clashes.pop()
    return True
