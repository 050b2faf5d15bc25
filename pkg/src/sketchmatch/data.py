"""Synthetic instance generation and CSV ingestion."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import BadParameter, EmptyFile, ParseError, RaggedRows
from .market import Instance, Node, Role

BIPARTITE = "bipartite"
POSTPONED = "postponed"

_ROLE_NAMES = {
    "seller": Role.SELLER, "s": Role.SELLER,
    "buyer": Role.BUYER, "b": Role.BUYER,
    "undetermined": Role.UNDETERMINED, "u": Role.UNDETERMINED,
}


def unit_vectors(rng: np.random.Generator, count: int, d: int) -> np.ndarray:
    """Rows drawn uniformly from [-1, 1]^d, scaled to unit length."""
    out = rng.uniform(-1.0, 1.0, size=(count, d))
    norms = np.linalg.norm(out, axis=1)
    for i in np.flatnonzero(norms == 0.0):
        while norms[i] == 0.0:
            out[i] = rng.uniform(-1.0, 1.0, size=d)
            norms[i] = np.linalg.norm(out[i])
    out /= norms[:, None]
    return out


def gen_synthetic(n: int, d: int, dl_duration: int, seed: int, mode: str = BIPARTITE) -> Instance:
    """Random unit-vector market.

    bipartite: seller i and buyer i both arrive at step i (0-based) and the
    seller stays matchable through step ``i + dl_duration``.
    postponed: n undetermined nodes arriving at steps 1..n.
    """
    if n < 1 or d < 1 or dl_duration < 1:
        raise BadParameter(f"need n, d, dl >= 1 (got n={n}, d={d}, dl={dl_duration})")
    rng = np.random.default_rng(seed)
    if mode == BIPARTITE:
        xs = unit_vectors(rng, n, d)
        ys = unit_vectors(rng, n, d)
        sellers = [Node(i, xs[i], i, i + dl_duration, Role.SELLER) for i in range(n)]
        buyers = [Node(i, ys[i], i, i + dl_duration, Role.BUYER) for i in range(n)]
        inst = Instance(d, sellers, buyers)
        inst._matrices[Role.SELLER] = xs
        inst._matrices[Role.BUYER] = ys
        return inst
    if mode == POSTPONED:
        xs = unit_vectors(rng, n, d)
        nodes = [Node(i, xs[i], i + 1, i + 1 + dl_duration, Role.UNDETERMINED) for i in range(n)]
        inst = Instance(d, undetermined=nodes)
        inst._matrices[Role.UNDETERMINED] = xs
        return inst
    raise BadParameter(f"unknown mode {mode!r}")


def random_small_instance(rng: np.random.Generator, max_n: int = 6, max_d: int = 8) -> Instance:
    """Tiny bipartite market with random arrivals and deadline windows."""
    n = int(rng.integers(1, max_n + 1))
    d = int(rng.integers(1, max_d + 1))
    horizon = 2 * n
    sellers, buyers = [], []
    for role, group in ((Role.SELLER, sellers), (Role.BUYER, buyers)):
        for i in range(n):
            arr = int(rng.integers(0, horizon))
            dl = int(rng.integers(0, n + 1))
            group.append(Node(i, rng.uniform(-1.0, 1.0, size=d), arr, arr + dl, role))
    return Instance(d, sellers, buyers)


ColumnRef = Union[int, str, None]


def _column_index(ref: ColumnRef, header: Optional[list], what: str) -> Optional[int]:
    if ref is None:
        return None
    if isinstance(ref, int):
        return ref
    if header is None:
        try:
            return int(ref)
        except ValueError:
            raise BadParameter(f"{what} column {ref!r} given by name but the file has no header")
    try:
        return header.index(ref)
    except ValueError:
        raise BadParameter(f"{what} column {ref!r} not in header {header}")


def load_csv(
    path,
    dl_duration: Optional[int] = None,
    *,
    header: bool = False,
    role_column: ColumnRef = None,
    deadline_column: ColumnRef = None,
    arrival_column: ColumnRef = None,
    id_column: ColumnRef = None,
    postponed: bool = False,
) -> Instance:
    """Read one node per row.

    Without a role column, rows alternate seller/buyer (or are all
    undetermined when ``postponed``). Arrival defaults to the data-row index;
    the deadline is ``arrival + dl_duration`` unless a deadline column gives
    absolute steps.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        raw = [row for row in csv.reader(fh)]
    lines = [(k + 1, row) for k, row in enumerate(raw) if row and any(c.strip() for c in row)]
    if not lines:
        raise EmptyFile(f"{path}: no rows")
    names = None
    if header:
        names = [c.strip() for c in lines[0][1]]
        lines = lines[1:]
        if not lines:
            raise EmptyFile(f"{path}: header but no data rows")
    role_i = _column_index(role_column, names, "role")
    dl_i = _column_index(deadline_column, names, "deadline")
    arr_i = _column_index(arrival_column, names, "arrival")
    id_i = _column_index(id_column, names, "id")
    if dl_i is None and dl_duration is None:
        raise BadParameter("need dl_duration or a deadline column")
    width = len(lines[0][1])
    special = {c for c in (role_i, dl_i, arr_i, id_i) if c is not None}
    for c in special:
        if not 0 <= c < width:
            raise BadParameter(f"column index {c} outside row width {width}")
    feature_cols = [c for c in range(width) if c not in special]
    if not feature_cols:
        raise BadParameter("no feature columns left")

    counters = {role: 0 for role in Role}
    groups = {role: [] for role in Role}
    for k, (lineno, row) in enumerate(lines):
        if len(row) != width:
            raise RaggedRows(f"line {lineno}: {len(row)} columns, expected {width}")
        values = np.empty(len(feature_cols))
        for out_i, c in enumerate(feature_cols):
            try:
                values[out_i] = float(row[c])
            except ValueError:
                raise ParseError(lineno, c + 1, row[c]) from None
        if role_i is not None:
            try:
                role = _ROLE_NAMES[row[role_i].strip().lower()]
            except KeyError:
                raise ParseError(lineno, role_i + 1, row[role_i]) from None
        elif postponed:
            role = Role.UNDETERMINED
        else:
            role = Role.SELLER if k % 2 == 0 else Role.BUYER

        def integer(c):
            try:
                return int(float(row[c]))
            except ValueError:
                raise ParseError(lineno, c + 1, row[c]) from None

        arrival = integer(arr_i) if arr_i is not None else k
        deadline = integer(dl_i) if dl_i is not None else arrival + dl_duration
        node_id = integer(id_i) if id_i is not None else counters[role]
        counters[role] += 1
        groups[role].append(Node(node_id, values, arrival, deadline, role))

    return Instance(
        len(feature_cols),
        groups[Role.SELLER],
        groups[Role.BUYER],
        groups[Role.UNDETERMINED],
    )


def write_csv(instance: Instance, path) -> None:
    """Write an instance in the format ``load_csv`` reads back losslessly.

    Header: ``role,id,arrival,deadline,x0..x{d-1}``; floats use ``repr``.
    """
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["role", "id", "arrival", "deadline", *[f"x{j}" for j in range(instance.d)]])
        for node in instance.stream:
            w.writerow(
                [node.role.name.lower(), node.id, node.arrival, node.deadline,
                 *map(repr, node.vector.tolist())]
            )


def load_instance_csv(path) -> Instance:
    """Read a file produced by :func:`write_csv`."""
    return load_csv(
        path, header=True, role_column="role", id_column="id",
        arrival_column="arrival", deadline_column="deadline",
    )
